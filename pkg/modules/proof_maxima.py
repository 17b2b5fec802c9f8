# modules/proof_maxima.py
# -*- coding: utf-8 -*-
"""
證明裡的純量部分：
  - f（奇數 n = 2k−1）與 g（偶數 n = 2k）兩個二次函數、在 {0,1} 頂點上的最大值
  - 偶數等號不可達：AᵀA 的非對角元素 k(k−1)/(2k−1) 不是整數
  - 2×2 代數恆等式與等號條件
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm

import numpy as np

from modules.errors import IdentityViolated, ParityMismatch, SingularMatrix
from modules.exact_linalg import (
    RationalMatrix, frobenius_norm_sq, identity, matmul, ones, scalar_mul, sub, transpose,
)


# ====== 係數 ======
def f_coefficients(k: int):
    """f(A) = a·Σa² − b·Σ(列和)²"""
    return Fraction(4), Fraction(2 * k + 1, k * k)


def g_coefficients(k: int):
    return Fraction((2 * k - 1) ** 2, k * (k - 1)), Fraction(2, k)


def f_second_derivative(k: int) -> Fraction:
    """∂²f/∂a_ij² = 8 − 2(2k+1)/k² = 2(4k²−2k−1)/k²"""
    return Fraction(2 * (4 * k * k - 2 * k - 1), k * k)


def g_second_derivative(k: int) -> Fraction:
    return Fraction(2 * (4 * k * k - 6 * k + 3), k * (k - 1))


def f_max(n: int) -> Fraction:
    return Fraction(n * n)


def g_max(k: int) -> Fraction:
    return Fraction(2 * k * (2 * k * k - 2 * k + 1), k - 1)


def _require_odd(A: RationalMatrix, k: int):
    if A.n != 2 * k - 1:
        raise ParityMismatch(f"f 需要階數 2k−1 = {2 * k - 1}，收到 {A.n}")


def _require_even(A: RationalMatrix, k: int):
    if k < 2 or A.n != 2 * k:
        raise ParityMismatch(f"g 需要 k ≥ 2 且階數 2k = {2 * k}，收到 n={A.n}, k={k}")


def _quadratic_form(A: RationalMatrix, a: Fraction, b: Fraction) -> Fraction:
    sq = frobenius_norm_sq(A)
    rs = sum((s * s for s in A.row_sums()), Fraction(0))
    return a * sq - b * rs


# ====== f / g ======
def f_value(A: RationalMatrix, k: int) -> Fraction:
    _require_odd(A, k)
    return _quadratic_form(A, *f_coefficients(k))


def f_value_via_norm(A: RationalMatrix, k: int) -> Fraction:
    """‖(2I − J/k) Aᵀ‖_F²（定義式）"""
    _require_odd(A, k)
    n = A.n
    T = sub(scalar_mul(2, identity(n)), scalar_mul(Fraction(1, k), ones(n)))
    return frobenius_norm_sq(matmul(T, transpose(A)))


def g_value(A: RationalMatrix, k: int) -> Fraction:
    _require_even(A, k)
    return _quadratic_form(A, *g_coefficients(k))


def g_value_via_norm(A: RationalMatrix, k: int) -> Fraction:
    """‖ √((k−1)/k³) · (k(2k−1)/(k−1) I − J) Aᵀ ‖_F²，純量平方直接乘進去"""
    _require_even(A, k)
    n = A.n
    c = Fraction(k * (2 * k - 1), k - 1)
    T = sub(scalar_mul(c, identity(n)), ones(n))
    return Fraction(k - 1, k ** 3) * frobenius_norm_sq(matmul(T, transpose(A)))


def quadratic_form_float(X: np.ndarray, a: float, b: float) -> float:
    X = np.asarray(X, dtype=float)
    return float(a * np.sum(X * X) - b * np.sum(X.sum(axis=1) ** 2))


def fd_second_derivative(X: np.ndarray, i: int, j: int, a: float, b: float, h: float = 1e-3) -> float:
    """中央差分 (φ(x+h) − 2φ(x) + φ(x−h)) / h²"""
    X = np.array(X, dtype=float)
    base = quadratic_form_float(X, a, b)
    X[i, j] += h
    up = quadratic_form_float(X, a, b)
    X[i, j] -= 2 * h
    down = quadratic_form_float(X, a, b)
    return (up - 2 * base + down) / (h * h)


# ====== 頂點最大值 ======
@dataclass
class VertexMaxReport:
    kind: str                 # "f" | "g"
    n: int
    k: int
    max_value: Fraction
    expected_max: Fraction
    per_row: dict             # p -> 單列貢獻 a·p − b·p²
    argmax_rows: list
    maximizer_profile: list
    centre: Fraction
    completed_square_ok: bool
    second_derivative: Fraction
    enumeration: dict | None = None
    passed: bool = False
    notes: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "n": self.n,
            "k": self.k,
            "max_value": str(self.max_value),
            "expected_max": str(self.expected_max),
            "per_row": {str(p): str(v) for p, v in self.per_row.items()},
            "argmax_rows": self.argmax_rows,
            "maximizer_profile": self.maximizer_profile,
            "centre": str(self.centre),
            "completed_square_ok": self.completed_square_ok,
            "second_derivative": str(self.second_derivative),
            "enumeration": self.enumeration,
            "passed": self.passed,
            "notes": self.notes,
        }


def enumerate_vertex_max(n: int, a: Fraction, b: Fraction, k: int) -> dict:
    """
    2^(n²) 個 {0,1} 矩陣全部計算 a·Σa² − b·Σ(列和)²。
    用共同分母 D 把值放大成整數，numpy 向量化仍是精確比較。
    """
    m = n * n
    pats = np.arange(1 << m, dtype=np.int64)
    shifts = np.arange(m - 1, -1, -1, dtype=np.int64)
    bits = ((pats[:, None] >> shifts) & 1).reshape(-1, n, n)
    row = bits.sum(axis=2)
    sq = bits.sum(axis=(1, 2))
    rs = (row * row).sum(axis=1)
    D = lcm(a.denominator, b.denominator)
    ai, bi = int(a * D), int(b * D)
    score = ai * sq - bi * rs
    best = int(score.max())
    winners = score == best
    return {
        "matrices": int(len(pats)),
        "max_value": str(Fraction(best, D)),
        "maximizers": int(winners.sum()),
        "all_maximizers_row_sums_k": bool(np.all(row[winners] == k)),
        "row_sums_k_are_maximizers": bool(np.all(winners[np.all(row == k, axis=1)])),
    }


def _vertex_max(kind: str, n: int, k: int, a: Fraction, b: Fraction, expected: Fraction,
                second: Fraction, cross_check: bool) -> VertexMaxReport:
    # 單列有 p 個 1：Σa² = p、(列和)² = p²，所以整體 = Σ_i φ(p_i)，各列獨立取最大
    per_row = {p: a * p - b * p * p for p in range(n + 1)}
    best = max(per_row.values())
    argmax = [p for p, v in per_row.items() if v == best]
    centre = a / (2 * b)
    top = a * a / (4 * b)
    completed = all(v == top - b * (p - centre) ** 2 for p, v in per_row.items())

    rep = VertexMaxReport(
        kind=kind, n=n, k=k, max_value=n * best, expected_max=expected,
        per_row=per_row, argmax_rows=argmax, maximizer_profile=[k] * n if argmax == [k] else [],
        centre=centre, completed_square_ok=completed, second_derivative=second,
    )
    if abs(k - centre) >= Fraction(1, 2):
        rep.notes.append("k 不是最接近中心的整數")
    if cross_check:
        rep.enumeration = enumerate_vertex_max(n, a, b, k)
        if Fraction(rep.enumeration["max_value"]) != expected:
            rep.notes.append("窮舉最大值與公式不符")
        if not (rep.enumeration["all_maximizers_row_sums_k"] and rep.enumeration["row_sums_k_are_maximizers"]):
            rep.notes.append("窮舉極大值點的列和不全是 k")
    rep.passed = (
        argmax == [k] and rep.max_value == expected and completed
        and second > 0 and not rep.notes
    )
    return rep


def verify_f_max(n: int, cross_check_max_n: int = 3) -> VertexMaxReport:
    if n < 3 or n % 2 == 0:
        raise ParityMismatch(f"verify_f_max 需要奇數 n ≥ 3，收到 {n}")
    k = (n + 1) // 2
    a, b = f_coefficients(k)
    return _vertex_max("f", n, k, a, b, f_max(n), f_second_derivative(k), n <= cross_check_max_n)


def verify_g_max(n: int, cross_check_max_n: int = 4) -> VertexMaxReport:
    if n < 4 or n % 2 == 1:
        raise ParityMismatch(f"verify_g_max 需要偶數 n ≥ 4，收到 {n}")
    k = n // 2
    a, b = g_coefficients(k)
    return _vertex_max("g", n, k, a, b, g_max(k), g_second_derivative(k), n <= cross_check_max_n)


# ====== 偶數等號不可達 ======
def check_even_non_attainment(n: int) -> Fraction:
    """
    等號成立時 AᵀA = k²/(2k−1)·(I + (k−1)/k·J)，非對角元素 = k(k−1)/(2k−1)，
    對 {0,1} 矩陣必須是整數 → 矛盾。同時檢查 (I − αJ)(I + βJ) = I（階數 2k）。
    """
    if n < 4 or n % 2 == 1:
        raise ParityMismatch(f"需要偶數 n ≥ 4，收到 {n}")
    k = n // 2
    alpha = Fraction(k - 1, k * (2 * k - 1))
    beta = Fraction(k - 1, k)
    if beta - alpha - alpha * beta * n != 0:
        raise IdentityViolated(f"k={k}: (I − αJ)⁻¹ ≠ I + βJ")
    off = Fraction(k * (k - 1), 2 * k - 1)
    if off.denominator == 1:
        raise IdentityViolated(f"k={k}: k(k−1)/(2k−1) = {off} 竟是整數")
    return off


def even_non_attainment_sweep(k_max: int) -> dict:
    min_den = None
    for k in range(2, k_max + 1):
        off = check_even_non_attainment(2 * k)
        min_den = off.denominator if min_den is None else min(min_den, off.denominator)
    return {"k_min": 2, "k_max": k_max, "checked": max(0, k_max - 1), "min_denominator": min_den}


# ====== n = 2 ======
def _coerce(*xs):
    """有 float 就全走浮點，否則全轉 Fraction（精確路徑）"""
    if any(isinstance(x, (float, np.floating)) for x in xs):
        return tuple(float(x) for x in xs)
    return tuple(Fraction(x) for x in xs)


def _det2(a, b, c, d):
    det = a * d - b * c
    if det == 0:
        raise SingularMatrix("ad = bc，2×2 矩陣奇異")
    return det


def case2x2_bracket(a, b, c, d):
    """(a−d)² + (b−c)² + 2ad(1−ad) + 2bc(1−bc) + 4abcd（每一項在 [0,1] 上都 ≥ 0）"""
    return (a - d) ** 2 + (b - c) ** 2 + 2 * a * d * (1 - a * d) + 2 * b * c * (1 - b * c) + 4 * a * b * c * d


def case2x2_identity_residual(a, b, c, d):
    """(ad−bc)²(‖A⁻¹‖_F² − 2) − bracket；有理數路徑必須恰為 0"""
    a, b, c, d = _coerce(a, b, c, d)
    det = _det2(a, b, c, d)
    inv = (d / det, -b / det, -c / det, a / det)
    norm_sq = sum(x * x for x in inv)
    return det * det * (norm_sq - 2) - case2x2_bracket(a, b, c, d)


def classify_2x2_equality(a, b, c, d) -> dict:
    """‖A⁻¹‖_F² = 2 ⇔ a=d、b=c、ad ∈ {0,1}、bc ∈ {0,1}、abcd = 0"""
    a, b, c, d = _coerce(a, b, c, d)
    _det2(a, b, c, d)
    cond = {
        "a_eq_d": a == d,
        "b_eq_c": b == c,
        "ad_in_01": a * d in (0, 1),
        "bc_in_01": b * c in (0, 1),
        "abcd_zero": a * b * c * d == 0,
    }
    cond["equality"] = all(cond.values())
    return cond
