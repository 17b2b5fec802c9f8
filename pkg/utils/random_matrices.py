# utils/random_matrices.py
# -*- coding: utf-8 -*-
"""
可重現的隨機矩陣（D_n = 元素都在 [0,1] 的 n×n 矩陣）：
每個工作單元用 SeedSequence(seed, spawn_key=(單元編號, ...)) 開自己的 PCG64 串流，
所以不管幾個 worker、怎麼分配，同一個單元拿到的亂數都一樣。
"""
from __future__ import annotations

from fractions import Fraction

import numpy as np

from modules.errors import SingularMatrix
from modules.exact_linalg import RationalMatrix, determinant_exact

PRNG_NAME = "numpy.random.PCG64"


def rng_for(seed: int, *key: int) -> np.random.Generator:
    ss = np.random.SeedSequence(int(seed), spawn_key=tuple(int(k) for k in key))
    return np.random.Generator(np.random.PCG64(ss))


def prng_metadata(seed: int) -> dict:
    return {"prng": PRNG_NAME, "numpy": np.__version__, "seed": int(seed)}


def random_rational_box(n: int, rng: np.random.Generator, max_den: int = 12) -> RationalMatrix:
    dens = rng.integers(1, max_den + 1, size=(n, n))
    nums = rng.integers(0, dens + 1)
    return RationalMatrix(tuple(
        tuple(Fraction(int(p), int(q)) for p, q in zip(rn, rd)) for rn, rd in zip(nums, dens)
    ))


def random_invertible_rational(n: int, rng: np.random.Generator, max_den: int = 12, max_tries: int = 1000):
    """回傳 (A, 抽了幾次)"""
    for tries in range(1, max_tries + 1):
        A = random_rational_box(n, rng, max_den)
        if determinant_exact(A) != 0:
            return A, tries
    raise SingularMatrix(f"連續 {max_tries} 次抽到奇異矩陣（n={n}）")


def random_well_conditioned(n: int, rng: np.random.Generator, max_cond: float = 1e3, max_tries: int = 1000) -> np.ndarray:
    """條件數 < max_cond 的 D_n 浮點矩陣（梯度 / 鏡像比對用）"""
    for attempt in range(max_tries):
        if attempt < max_tries // 10:
            X = rng.random((n, n))
        else:
            # 均勻抽樣在大 n 幾乎抽不到；改抽對角占優（非對角列和 < 1/4，對角 ≥ 1/2）
            X = rng.random((n, n)) * (0.25 / n)
            X[np.diag_indices(n)] = 0.5 + 0.5 * rng.random(n)
        if np.linalg.cond(X) < max_cond:
            return X
    raise SingularMatrix(f"找不到條件數 < {max_cond} 的矩陣（n={n}）")


def random_quadruple(rng: np.random.Generator, exact: bool, max_den: int = 50):
    """2×2 恆等式用的 (a, b, c, d)，ad ≠ bc"""
    while True:
        if exact:
            dens = rng.integers(1, max_den + 1, size=4)
            q = tuple(Fraction(int(rng.integers(0, d + 1)), int(d)) for d in dens)
        else:
            q = tuple(float(x) for x in rng.random(4))
        a, b, c, d = q
        if a * d - b * c != 0:
            return q
