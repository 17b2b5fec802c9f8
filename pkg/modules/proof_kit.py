# modules/proof_kit.py
# -*- coding: utf-8 -*-
"""
M / N 輔助矩陣與 Cauchy-Schwarz 鏈的逐步檢查。

    奇數 n = 2k−1： M = [[1, eᵀ], [e, −k A⁻¹]]
                    N = [[1, eᵀ], [e, −(2I − J/k) Aᵀ]]
    偶數 n = 2k   ： M = [[0, eᵀ], [e,  s·A⁻¹]]
                    N = [[0, eᵀ], [e, (1/s)(cI − J) Aᵀ]]，s² = k³/(k−1)，c = k(2k−1)/(k−1)

偶數情形的 s 是無理數，所以每個區塊存 (corner, core, scale_sq)：
範數平方、內積都只用到 scale_sq 的有理數平方根，全程精確。
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

from modules.bounds import BoundCase, classify_case, lower_bound_sq
from modules.designs import hadamard_embedding, is_smatrix
from modules.errors import ChainBroken, EntryOutOfBox, IdentityViolated, ParityMismatch
from modules.exact_linalg import (
    RationalMatrix, bordered, frobenius_norm_sq, identity, inner_product, invert_exact,
    matmul, ones, scalar_mul, sub, transpose,
)
from modules.proof_maxima import f_max, f_value, g_max, g_value


def rational_sqrt(q: Fraction) -> Fraction | None:
    q = Fraction(q)
    if q < 0:
        return None
    rn, rd = isqrt(q.numerator), isqrt(q.denominator)
    if rn * rn == q.numerator and rd * rd == q.denominator:
        return Fraction(rn, rd)
    return None


@dataclass(frozen=True)
class ScaledBlock:
    """[[corner, eᵀ], [e, √scale_sq · core]]，階數 core.n + 1"""
    corner: Fraction
    core: RationalMatrix
    scale_sq: Fraction = Fraction(1)

    @property
    def order(self) -> int:
        return self.core.n + 1

    def norm_sq(self) -> Fraction:
        return self.corner ** 2 + 2 * self.core.n + self.scale_sq * frobenius_norm_sq(self.core)

    def materialize(self) -> RationalMatrix | None:
        """scale 為有理數時才能寫成真正的 RationalMatrix"""
        s = rational_sqrt(self.scale_sq)
        if s is None:
            return None
        return bordered(self.corner, scalar_mul(s, self.core))


def _scale_product(X: ScaledBlock, Y: ScaledBlock) -> Fraction:
    s = rational_sqrt(X.scale_sq * Y.scale_sq)
    if s is None:
        raise IdentityViolated("兩個區塊的縮放乘積不是有理數，無法精確計算內積")
    return s


def block_inner(X: ScaledBlock, Y: ScaledBlock) -> Fraction:
    """⟨X, Y⟩ = Tr(X Yᵀ)"""
    return X.corner * Y.corner + 2 * X.core.n + _scale_product(X, Y) * inner_product(X.core, Y.core)


def block_product(X: ScaledBlock, Y: ScaledBlock):
    """X Yᵀ 的左上角與右下區塊：(corner·corner + n, J + s_X s_Y · X.core Y.coreᵀ)"""
    n = X.core.n
    top_left = X.corner * Y.corner + n
    lower = matmul(X.core, transpose(Y.core))
    lower = scalar_mul(_scale_product(X, Y), lower)
    lower = RationalMatrix(tuple(tuple(v + 1 for v in r) for r in lower.rows))
    return top_left, lower


def blocks_equal(X: ScaledBlock, Y: ScaledBlock) -> bool:
    if X.corner != Y.corner or X.core.n != Y.core.n:
        return False
    if Y.scale_sq == 0 or X.scale_sq == 0:
        return X.scale_sq == Y.scale_sq and X.core == Y.core
    ratio = rational_sqrt(X.scale_sq / Y.scale_sq)
    if ratio is None:
        zero = all(v == 0 for v in X.core.entries()) and all(v == 0 for v in Y.core.entries())
        return zero
    return scalar_mul(ratio, X.core) == Y.core


# ====== ProofPair ======
@dataclass(frozen=True)
class ProofPair:
    n: int
    case: str
    k: int
    A: RationalMatrix
    A_inv: RationalMatrix
    M: ScaledBlock
    N: ScaledBlock


def _resolve_case(A: RationalMatrix, case) -> BoundCase:
    if isinstance(case, BoundCase):
        if case.n != A.n:
            raise ParityMismatch(f"BoundCase n={case.n} 與矩陣階數 {A.n} 不符")
        wanted = case.case
    else:
        wanted = str(case)
    actual = classify_case(A.n)
    if wanted not in ("odd", "even") or actual.case != wanted:
        raise ParityMismatch(f"階數 {A.n} 屬於 {actual.case}，不能用 {wanted} 的 M/N 建構")
    return actual


def build_proof_pair(A: RationalMatrix, case) -> ProofPair:
    c = _resolve_case(A, case)
    if not A.in_box():
        raise EntryOutOfBox("build_proof_pair 需要元素都在 [0, 1]")
    n, k = A.n, c.k
    A_inv = invert_exact(A)
    At = transpose(A)

    if c.case == "odd":
        T = sub(scalar_mul(2, identity(n)), scalar_mul(Fraction(1, k), ones(n)))
        M = ScaledBlock(Fraction(1), scalar_mul(-k, A_inv))
        N = ScaledBlock(Fraction(1), scalar_mul(-1, matmul(T, At)))
    else:
        cc = Fraction(k * (2 * k - 1), k - 1)
        T = sub(scalar_mul(cc, identity(n)), ones(n))
        M = ScaledBlock(Fraction(0), A_inv, Fraction(k ** 3, k - 1))
        N = ScaledBlock(Fraction(0), matmul(T, At), Fraction(k - 1, k ** 3))
    return ProofPair(n=n, case=c.case, k=k, A=A, A_inv=A_inv, M=M, N=N)


# ====== ProofTrace ======
@dataclass(frozen=True)
class ProofTrace:
    n: int
    case: str
    inner_product_value: Fraction
    expected_inner_product: Fraction
    M_norm_sq: Fraction
    N_norm_sq: Fraction
    cauchy_schwarz_holds: bool
    cauchy_schwarz_tight: bool
    derived_bound_sq_on_inverse: Fraction
    inverse_norm_sq: Fraction
    pair_equal: bool

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "case": self.case,
            "inner_product_value": str(self.inner_product_value),
            "expected_inner_product": str(self.expected_inner_product),
            "M_norm_sq": str(self.M_norm_sq),
            "N_norm_sq": str(self.N_norm_sq),
            "cauchy_schwarz_holds": self.cauchy_schwarz_holds,
            "cauchy_schwarz_tight": self.cauchy_schwarz_tight,
            "derived_bound_sq_on_inverse": str(self.derived_bound_sq_on_inverse),
            "inverse_norm_sq": str(self.inverse_norm_sq),
            "pair_equal": self.pair_equal,
        }


def expected_inner_product(case: str, n: int, k: int) -> Fraction:
    if case == "odd":
        return Fraction((n + 1) ** 2)
    return Fraction(2 * k * (2 * k * k - 1), k - 1)


def verify_trace_identity(pair: ProofPair) -> ProofTrace:
    """
    ⟨M, N⟩ 與 A 無關：奇數 (n+1)²、偶數 2k(2k²−1)/(k−1)。
    另外檢查 M Nᵀ 的區塊結構、兩個範數分解、Cauchy-Schwarz，以及由此推出的下界。
    任何一項不成立都是實作錯誤 → IdentityViolated。
    """
    n, k, case = pair.n, pair.k, pair.case
    ip = block_inner(pair.M, pair.N)
    expected = expected_inner_product(case, n, k)
    if ip != expected:
        raise IdentityViolated(f"n={n}: ⟨M,N⟩ = {ip}，應為 {expected}")

    top_left, lower = block_product(pair.M, pair.N)
    if case == "odd":
        want_tl, want_diag = Fraction(n + 1), Fraction(n + 1)
    else:
        want_tl, want_diag = Fraction(2 * k), Fraction(k * (2 * k - 1), k - 1)
    if top_left != want_tl or lower != scalar_mul(want_diag, identity(n)):
        raise IdentityViolated(f"n={n}: M Nᵀ 的區塊結構不符")

    h = frobenius_norm_sq(pair.A_inv)
    mn, nn = pair.M.norm_sq(), pair.N.norm_sq()
    if case == "odd":
        base = 1 + 2 * n
        ok = mn == base + k * k * h and nn == base + f_value(pair.A, k)
        derived = (ip * ip / (base + f_max(n)) - base) / (k * k)
    else:
        base = 4 * k
        ok = mn == base + Fraction(k ** 3, k - 1) * h and nn == base + g_value(pair.A, k)
        derived = (ip * ip / (base + g_max(k)) - base) * Fraction(k - 1, k ** 3)
    if not ok:
        raise IdentityViolated(f"n={n}: ‖M‖² / ‖N‖² 的分解不符")

    cs = ip * ip <= mn * nn
    if not cs:
        raise IdentityViolated(f"n={n}: Cauchy-Schwarz 不成立（⟨M,N⟩² = {ip * ip} > {mn * nn}）")
    if derived != lower_bound_sq(n) or h < derived:
        raise IdentityViolated(f"n={n}: 推導出的下界 {derived} 與 ‖A⁻¹‖² = {h} 不一致")

    return ProofTrace(
        n=n, case=case,
        inner_product_value=ip, expected_inner_product=expected,
        M_norm_sq=mn, N_norm_sq=nn,
        cauchy_schwarz_holds=cs, cauchy_schwarz_tight=ip * ip == mn * nn,
        derived_bound_sq_on_inverse=derived, inverse_norm_sq=h,
        pair_equal=blocks_equal(pair.M, pair.N),
    )


# ====== 奇數等號鏈 ======
def equality_chain_odd(A: RationalMatrix) -> dict:
    """等號成立時每一步的檢查結果（不拋例外，給報告用）"""
    n = A.n
    k = (n + 1) // 2
    pair = build_proof_pair(A, "odd")
    e_k = tuple(Fraction(k) for _ in range(n))
    M, N = pair.M.materialize(), pair.N.materialize()
    MNt = matmul(M, transpose(N))
    NNt = matmul(N, transpose(N))
    target = scalar_mul(n + 1, identity(n + 1))
    return {
        "binary": A.is_binary(),
        "row_sums_k": A.row_sums() == e_k,
        "col_sums_k": A.col_sums() == e_k,
        "closed_form_inverse": scalar_mul(k, pair.A_inv) == sub(scalar_mul(2, transpose(A)), ones(n)),
        "M_equals_N": M == N,
        "MNt_scaled_identity": MNt == target,
        "NNt_scaled_identity": NNt == target,
        "Nt_is_embedding": transpose(N) == hadamard_embedding(A),
        "is_smatrix": is_smatrix(A),
    }


def verify_equality_case_odd(A: RationalMatrix) -> bool:
    """
    ‖A⁻¹‖_F² = 4n²/(n+1)² 才回傳 True，並要求整條等號鏈都成立；
    等號成立但鏈斷掉 → ChainBroken。
    """
    c = classify_case(A.n)
    if c.case != "odd":
        raise ParityMismatch(f"verify_equality_case_odd 需要奇數 n ≥ 3，收到 {A.n}")
    if not A.in_box():
        raise EntryOutOfBox("verify_equality_case_odd 需要元素都在 [0, 1]")
    if frobenius_norm_sq(invert_exact(A)) != lower_bound_sq(A.n):
        return False
    steps = equality_chain_odd(A)
    broken = [name for name, ok in steps.items() if not ok]
    if broken:
        raise ChainBroken(f"n={A.n}: 等號成立但以下步驟失敗：{', '.join(broken)}")
    return True
