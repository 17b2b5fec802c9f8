# modules/designs.py
# -*- coding: utf-8 -*-
"""
Hadamard 矩陣與 S-matrix：
- 建構：Sylvester 倍增、Paley I（q ≡ 3 mod 4）、Paley II（q ≡ 1 mod 4）、循環二次剩餘 S-matrix
- 驗證：is_hadamard / is_smatrix 全部用整數精確比對，沒有容差
- S-matrix 反矩陣封閉式：k·S⁻¹ = 2Sᵀ − J
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from config import EIL_MAX_ORDER
from modules.errors import (
    DataError, InvalidPrime, NotNormalized, OrderTooLarge, UnsupportedOrder,
)
from modules.exact_linalg import (
    RationalMatrix, bordered, ones, scalar_mul, sub, transpose,
)


# ----------------- 型別 -----------------
@dataclass(frozen=True)
class HadamardMatrix:
    matrix: RationalMatrix
    normalized: bool = False

    def __post_init__(self):
        if not is_hadamard(self.matrix):
            raise DataError(f"不是 Hadamard 矩陣（階數 {self.matrix.n}）")
        if self.normalized and not _is_normalized(self.matrix):
            raise NotNormalized("標記為 normalized，但第一列/第一行不全是 +1")

    @property
    def n(self) -> int:
        return self.matrix.n


@dataclass(frozen=True)
class SMatrix:
    matrix: RationalMatrix
    k: int

    def __post_init__(self):
        n = self.matrix.n
        if n != 2 * self.k - 1:
            raise DataError(f"S-matrix 階數 {n} 與 k={self.k} 不符（需 n = 2k − 1）")
        if not is_smatrix(self.matrix):
            raise DataError(f"不是 S-matrix（階數 {n}）")

    @property
    def n(self) -> int:
        return self.matrix.n


# ----------------- 整數小工具 -----------------
def _pm_rows(H: RationalMatrix):
    """全為 ±1 才回傳整數列，否則 None"""
    rows = []
    for r in H.rows:
        if any(v != 1 and v != -1 for v in r):
            return None
        rows.append([int(v) for v in r])
    return rows


def _is_normalized(H: RationalMatrix) -> bool:
    return all(v == 1 for v in H.rows[0]) and all(r[0] == 1 for r in H.rows)


def _from_int_rows(rows) -> RationalMatrix:
    return RationalMatrix(tuple(tuple(r) for r in rows))


def _double(rows):
    """[[H, H], [H, −H]]"""
    top = [r + r for r in rows]
    bottom = [r + [-v for v in r] for r in rows]
    return top + bottom


def _guard_order(order: int, max_order: int):
    if order > max_order:
        raise OrderTooLarge(f"階數 {order} 超過上限 EIL_MAX_ORDER={max_order}")


def is_prime(q: int) -> bool:
    if q < 2:
        return False
    for x in range(2, int(q ** 0.5) + 1):
        if q % x == 0:
            return False
    return True


def _chi(a: int, q: int) -> int:
    """二次特徵（Legendre symbol）"""
    a %= q
    if a == 0:
        return 0
    return 1 if pow(a, (q - 1) // 2, q) == 1 else -1


def _jacobsthal(q: int):
    return [[_chi(j - i, q) for j in range(q)] for i in range(q)]


# ----------------- 驗證 -----------------
def is_hadamard(H: RationalMatrix) -> bool:
    """元素全為 ±1 且 H Hᵀ = nI（精確）"""
    rows = _pm_rows(H)
    if rows is None:
        return False
    n = len(rows)
    for i in range(n):
        for j in range(i + 1, n):
            if sum(a * b for a, b in zip(rows[i], rows[j])) != 0:
                return False
    return True


def hadamard_embedding(A: RationalMatrix) -> RationalMatrix:
    """[[1, eᵀ], [e, J − 2A]]"""
    return bordered(1, sub(ones(A.n), scalar_mul(2, A)))


def is_smatrix(A: RationalMatrix) -> bool:
    """{0,1} 元素、奇數階、且 Hadamard 嵌入成立（這就是奇數情形等號的可執行刻畫）"""
    if A.n % 2 == 0 or not A.is_binary():
        return False
    return is_hadamard(hadamard_embedding(A))


# ----------------- 建構 -----------------
def sylvester(m: int, max_order: int = EIL_MAX_ORDER) -> HadamardMatrix:
    if m < 0:
        raise DataError(f"m 必須 ≥ 0，收到 {m}")
    _guard_order(2 ** m, max_order)
    rows = [[1]]
    for _ in range(m):
        rows = _double(rows)
    return HadamardMatrix(_from_int_rows(rows), normalized=True)


def paley(q: int, max_order: int = EIL_MAX_ORDER) -> HadamardMatrix:
    """
    Paley I：q 質數、q ≡ 3 (mod 4)，階數 q+1。
    H = I + [[0, eᵀ], [−e, Q]]，Q 為 Jacobsthal 矩陣（反對稱），最後再 normalize。
    """
    if not is_prime(q) or q % 4 != 3:
        raise InvalidPrime(f"Paley I 需要質數 q ≡ 3 (mod 4)，收到 q={q}")
    _guard_order(q + 1, max_order)
    Q = _jacobsthal(q)
    rows = [[1] * (q + 1)]
    for i in range(q):
        rows.append([-1] + [Q[i][j] + (1 if i == j else 0) for j in range(q)])
    return normalize(HadamardMatrix(_from_int_rows(rows)))


def paley_ii(q: int, max_order: int = EIL_MAX_ORDER) -> HadamardMatrix:
    """
    Paley II：q 質數、q ≡ 1 (mod 4)，階數 2(q+1)。
    C = [[0, eᵀ], [e, Q]]（對稱 conference matrix），H = [[C+I, C−I], [C−I, −C−I]]
    """
    if not is_prime(q) or q % 4 != 1:
        raise InvalidPrime(f"Paley II 需要質數 q ≡ 1 (mod 4)，收到 q={q}")
    _guard_order(2 * (q + 1), max_order)
    Q = _jacobsthal(q)
    m = q + 1
    C = [[0] + [1] * q] + [[1] + Q[i] for i in range(q)]
    eye = lambda i, j: 1 if i == j else 0  # noqa: E731
    rows = []
    for i in range(m):
        rows.append([C[i][j] + eye(i, j) for j in range(m)] + [C[i][j] - eye(i, j) for j in range(m)])
    for i in range(m):
        rows.append([C[i][j] - eye(i, j) for j in range(m)] + [-C[i][j] - eye(i, j) for j in range(m)])
    return normalize(HadamardMatrix(_from_int_rows(rows)))


def normalize(H: HadamardMatrix) -> HadamardMatrix:
    """先把首元素為 −1 的列取負，再把首元素為 −1 的行取負"""
    rows = [[int(v) for v in r] for r in H.matrix.rows]
    rows = [[-v for v in r] if r[0] == -1 else r for r in rows]
    flip = [v == -1 for v in rows[0]]
    rows = [[-v if f else v for v, f in zip(r, flip)] for r in rows]
    return HadamardMatrix(_from_int_rows(rows), normalized=True)


def hadamard_of_order(n: int, max_order: int = EIL_MAX_ORDER) -> HadamardMatrix:
    """
    支援：2 的冪（Sylvester，優先）以及 2^a · m，m ∈ {q+1 (Paley I), 2(q+1) (Paley II)}。
    其他階數直接報錯，不做搜尋。
    """
    if n < 1:
        raise UnsupportedOrder(f"階數必須 ≥ 1，收到 {n}")
    _guard_order(n, max_order)
    if n & (n - 1) == 0:
        return sylvester(n.bit_length() - 1, max_order)
    if n % 4 != 0:
        raise UnsupportedOrder(f"階數 {n} > 2 且不是 4 的倍數，不存在 Hadamard 矩陣")

    a, m = 0, n
    while True:
        base = None
        if is_prime(m - 1) and (m - 1) % 4 == 3:
            base = paley(m - 1, max_order)
        elif m % 2 == 0 and is_prime(m // 2 - 1) and (m // 2 - 1) % 4 == 1:
            base = paley_ii(m // 2 - 1, max_order)
        if base is not None:
            rows = [[int(v) for v in r] for r in base.matrix.rows]
            for _ in range(a):
                rows = _double(rows)
            return HadamardMatrix(_from_int_rows(rows), normalized=True)
        if m % 2 != 0:
            break
        a, m = a + 1, m // 2
    raise UnsupportedOrder(f"階數 {n} 沒有已實作的建構（Sylvester / Paley I / Paley II）")


# ----------------- S-matrix -----------------
def smatrix_from_hadamard(H: HadamardMatrix) -> SMatrix:
    """1 → 0、−1 → 1，刪掉第一列與第一行：s_ij = (1 − h_{i+1,j+1}) / 2"""
    if not _is_normalized(H.matrix):
        raise NotNormalized("smatrix_from_hadamard 需要 normalized Hadamard 矩陣")
    if H.n < 4:
        raise UnsupportedOrder(f"S-matrix 需要階數 ≥ 4 的 Hadamard 矩陣，收到 {H.n}")
    rows = tuple(tuple((1 - int(v)) // 2 for v in r[1:]) for r in H.matrix.rows[1:])
    return SMatrix(RationalMatrix(rows), k=H.n // 2)


def smatrix_of_order(n: int, max_order: int = EIL_MAX_ORDER) -> SMatrix:
    if n % 2 == 0:
        raise UnsupportedOrder(f"S-matrix 階數必須是奇數，收到 {n}")
    return smatrix_from_hadamard(hadamard_of_order(n + 1, max_order))


def cyclic_smatrix(q: int, max_order: int = EIL_MAX_ORDER) -> SMatrix:
    """
    循環 S-matrix：首列在 0 與所有非零平方剩餘的位置放 1，逐列左移一格。
    只適用質數 q ≡ 3 (mod 4)。
    """
    if not is_prime(q) or q % 4 != 3:
        raise InvalidPrime(f"循環 S-matrix 需要質數 q ≡ 3 (mod 4)，收到 q={q}")
    _guard_order(q, max_order)
    first = [0] * q
    first[0] = 1
    for i in range(1, (q - 1) // 2 + 1):
        first[(i * i) % q] = 1
    rows = tuple(tuple(first[(i + j) % q] for j in range(q)) for i in range(q))
    return SMatrix(RationalMatrix(rows), k=(q + 1) // 2)


def smatrix_closed_form_inverse(S: SMatrix) -> RationalMatrix:
    """S⁻¹ = (1/k)(2Sᵀ − J)"""
    return scalar_mul(Fraction(1, S.k), sub(scalar_mul(2, transpose(S.matrix)), ones(S.n)))
