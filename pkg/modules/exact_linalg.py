# modules/exact_linalg.py
# -*- coding: utf-8 -*-
"""
精確有理數矩陣運算（所有精確檢查的底層）：
- Rational 直接用 fractions.Fraction（永遠約分、分母 > 0、零 = 0/1）
- RationalMatrix：不可變方陣，元素全是 Fraction
- 行列式 / 反矩陣：先把每列通分成整數，再做 fraction-free（Bareiss 式）消去
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import lcm
from typing import Iterable, Sequence

import numpy as np

from modules.errors import DimensionMismatch, MatrixParseError, SingularMatrix

Rational = Fraction


def to_rational(x) -> Fraction:
    """int / Fraction / float（精確展開）/ 'p/q' / '0.25' → Fraction"""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        return Fraction(int(x))
    if isinstance(x, (int, np.integer)):
        return Fraction(int(x))
    try:
        if isinstance(x, (float, np.floating)):
            return Fraction(float(x))
        return Fraction(str(x).strip())
    except (ValueError, OverflowError, ZeroDivisionError) as e:
        raise MatrixParseError(f"無法解析為有理數：{x!r}（{e}）") from e


@dataclass(frozen=True)
class RationalMatrix:
    rows: tuple

    def __post_init__(self):
        rows = tuple(tuple(to_rational(v) for v in r) for r in self.rows)
        n = len(rows)
        if n == 0:
            raise DimensionMismatch("矩陣階數必須 ≥ 1")
        if any(len(r) != n for r in rows):
            raise DimensionMismatch(f"不是方陣：{n} 列但列長為 {[len(r) for r in rows]}")
        object.__setattr__(self, "rows", rows)

    @property
    def n(self) -> int:
        return len(self.rows)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def entries(self) -> Iterable[Fraction]:
        for r in self.rows:
            yield from r

    def is_binary(self) -> bool:
        return all(v == 0 or v == 1 for v in self.entries())

    def in_box(self) -> bool:
        return all(0 <= v <= 1 for v in self.entries())

    def to_float(self) -> np.ndarray:
        return np.array([[float(v) for v in r] for r in self.rows], dtype=float)

    def row_sums(self) -> tuple:
        return tuple(sum(r, Fraction(0)) for r in self.rows)

    def col_sums(self) -> tuple:
        return tuple(sum(c, Fraction(0)) for c in zip(*self.rows))


def identity(n: int) -> RationalMatrix:
    return RationalMatrix(tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))


def ones(n: int) -> RationalMatrix:
    """J = e eᵀ"""
    return RationalMatrix(tuple((1,) * n for _ in range(n)))


def zeros(n: int) -> RationalMatrix:
    return RationalMatrix(tuple((0,) * n for _ in range(n)))


def _same_order(A: RationalMatrix, B: RationalMatrix, op: str):
    if A.n != B.n:
        raise DimensionMismatch(f"{op}: 階數不符 {A.n} vs {B.n}")


# ----------------- 基本運算 -----------------
def transpose(A: RationalMatrix) -> RationalMatrix:
    return RationalMatrix(tuple(zip(*A.rows)))


def add(A: RationalMatrix, B: RationalMatrix) -> RationalMatrix:
    _same_order(A, B, "add")
    return RationalMatrix(tuple(tuple(a + b for a, b in zip(ra, rb)) for ra, rb in zip(A.rows, B.rows)))


def sub(A: RationalMatrix, B: RationalMatrix) -> RationalMatrix:
    _same_order(A, B, "sub")
    return RationalMatrix(tuple(tuple(a - b for a, b in zip(ra, rb)) for ra, rb in zip(A.rows, B.rows)))


def scalar_mul(c, A: RationalMatrix) -> RationalMatrix:
    c = to_rational(c)
    return RationalMatrix(tuple(tuple(c * a for a in r) for r in A.rows))


def matmul(A: RationalMatrix, B: RationalMatrix) -> RationalMatrix:
    _same_order(A, B, "matmul")
    cols = tuple(zip(*B.rows))
    return RationalMatrix(tuple(
        tuple(sum((a * b for a, b in zip(r, c)), Fraction(0)) for c in cols)
        for r in A.rows
    ))


def bordered(corner, core: RationalMatrix, border=1) -> RationalMatrix:
    """[[corner, b·eᵀ], [b·e, core]]，階數 n+1（M / N / Hadamard 嵌入都用這個形狀）"""
    b = to_rational(border)
    top = (to_rational(corner),) + (b,) * core.n
    return RationalMatrix((top,) + tuple((b,) + r for r in core.rows))


# ----------------- 範數 / 內積 -----------------
def frobenius_norm_sq(A: RationalMatrix) -> Fraction:
    return sum((v * v for v in A.entries()), Fraction(0))


def inner_product(A: RationalMatrix, B: RationalMatrix) -> Fraction:
    """⟨A, B⟩ = Tr(A Bᵀ) = Σ a_ij b_ij"""
    _same_order(A, B, "inner_product")
    return sum((a * b for a, b in zip(A.entries(), B.entries())), Fraction(0))


# ----------------- fraction-free 消去 -----------------
def _clear_row_denominators(A: RationalMatrix):
    """B = diag(d)·A 為整數矩陣，d_i = 第 i 列分母的最小公倍數"""
    d = [reduce(lcm, (v.denominator for v in r), 1) for r in A.rows]
    B = [[v.numerator * (di // v.denominator) for v in r] for r, di in zip(A.rows, d)]
    return B, d


def bareiss_det(rows: Sequence[Sequence[int]]) -> int:
    """整數矩陣的精確行列式（Bareiss，中間值全為子行列式）"""
    m = [list(r) for r in rows]
    n = len(m)
    prev, sign = 1, 1
    for k in range(n - 1):
        piv = next((i for i in range(k, n) if m[i][k] != 0), None)
        if piv is None:
            return 0
        if piv != k:
            m[k], m[piv] = m[piv], m[k]
            sign = -sign
        pk = m[k][k]
        rk = m[k]
        for i in range(k + 1, n):
            ri = m[i]
            f = ri[k]
            for j in range(k + 1, n):
                ri[j] = (pk * ri[j] - f * rk[j]) // prev
        prev = pk
    return sign * m[n - 1][n - 1]


def bareiss_adjugate(rows: Sequence[Sequence[int]]):
    """
    fraction-free Gauss-Jordan on [B | I]。
    結束時左半 = p·I、右半 = p·B⁻¹（全是整數），p = ±det(B)。
    回傳 (p, 右半)；奇異時回傳 (0, None)。
    """
    n = len(rows)
    aug = [list(r) + [int(i == j) for j in range(n)] for i, r in enumerate(rows)]
    width = 2 * n
    prev = 1
    for k in range(n):
        piv = next((i for i in range(k, n) if aug[i][k] != 0), None)
        if piv is None:
            return 0, None
        if piv != k:
            aug[k], aug[piv] = aug[piv], aug[k]
        pk = aug[k][k]
        rk = aug[k]
        for i in range(n):
            if i == k:
                continue
            ri = aug[i]
            f = ri[k]
            # 整除是 Bareiss 的不變量（每個元素都是某個子行列式）
            aug[i] = [(pk * ri[j] - f * rk[j]) // prev for j in range(width)]
        prev = pk
    return prev, [r[n:] for r in aug]


def int_inverse_norm_sq(rows: Sequence[Sequence[int]]) -> Fraction | None:
    """整數矩陣 ‖B⁻¹‖_F²；奇異回傳 None（窮舉用的快速路徑）"""
    p, adj = bareiss_adjugate(rows)
    if p == 0:
        return None
    return Fraction(sum(v * v for r in adj for v in r), p * p)


def determinant_exact(A: RationalMatrix) -> Fraction:
    B, d = _clear_row_denominators(A)
    return Fraction(bareiss_det(B), reduce(lambda x, y: x * y, d, 1))


def invert_exact(A: RationalMatrix) -> RationalMatrix:
    """精確反矩陣；A = diag(d)⁻¹·B → A⁻¹ = B⁻¹·diag(d)"""
    B, d = _clear_row_denominators(A)
    p, adj = bareiss_adjugate(B)
    if p == 0:
        raise SingularMatrix(f"矩陣奇異（det = 0），階數 {A.n}")
    return RationalMatrix(tuple(
        tuple(Fraction(v * dj, p) for v, dj in zip(r, d)) for r in adj
    ))


def inverse_norm_sq(A: RationalMatrix) -> Fraction:
    return frobenius_norm_sq(invert_exact(A))
