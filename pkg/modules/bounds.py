# modules/bounds.py
# -*- coding: utf-8 -*-
"""
‖A⁻¹‖_F 的下界（一律用平方比較，√10/2、√2 都是無理數）：
  - n 奇數 ≥ 3：4n²/(n+1)²，等號 ⇔ S-matrix
  - n 偶數 ≥ 4：4(n²−2n+2)/n²，嚴格不等式（等號不可能）
  - n = 2   ：2，等號 ⇔ 單位矩陣或交換矩陣
  - n = 1   ：1（延伸定義，paper_scope = False）
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from config import EQUALITY_TOL
from modules.errors import DataError, EntryOutOfBox
from modules.exact_linalg import RationalMatrix, inverse_norm_sq


@dataclass(frozen=True)
class BoundCase:
    n: int
    case: str     # "odd" | "even" | "two" | "one"
    k: int

    @property
    def paper_scope(self) -> bool:
        return self.case != "one"


def classify_case(n: int) -> BoundCase:
    if n < 1:
        raise DataError(f"階數必須 ≥ 1，收到 {n}")
    if n == 1:
        return BoundCase(1, "one", 1)
    if n == 2:
        return BoundCase(2, "two", 1)
    if n % 2 == 1:
        return BoundCase(n, "odd", (n + 1) // 2)
    return BoundCase(n, "even", n // 2)


def lower_bound_sq(n: int) -> Fraction:
    c = classify_case(n)
    if c.case == "one":
        return Fraction(1)
    if c.case == "two":
        return Fraction(2)
    if c.case == "odd":
        return Fraction(4 * n * n, (n + 1) ** 2)
    return Fraction(4 * (n * n - 2 * n + 2), n * n)


@dataclass(frozen=True)
class BoundReport:
    n: int
    case: str
    bound_sq: Fraction
    norm_sq: object          # Fraction（精確路徑）或 float（抽樣路徑）
    satisfied: bool
    equality: bool
    margin: object
    paper_scope: bool = True
    exact: bool = True
    equality_candidate: bool = False   # 浮點 margin < EQUALITY_TOL，需升級精確檢查

    @property
    def sharp(self) -> bool:
        """偶數 n 的下界是嚴格的，從不宣稱等號可達"""
        return self.case != "even"

    def to_json(self) -> dict:
        def _num(x):
            return str(x) if isinstance(x, Fraction) else float(x)

        return {
            "n": self.n,
            "case": self.case,
            "bound_sq": str(self.bound_sq),
            "bound": math.sqrt(float(self.bound_sq)),
            "norm_sq": _num(self.norm_sq),
            "satisfied": self.satisfied,
            "equality": self.equality,
            "margin": _num(self.margin),
            "paper_scope": self.paper_scope,
            "exact": self.exact,
            "sharp": self.sharp,
            "equality_candidate": self.equality_candidate,
        }


def _check_box(A: RationalMatrix):
    bad = [(i, j, v) for i, r in enumerate(A.rows) for j, v in enumerate(r) if not (0 <= v <= 1)]
    if bad:
        i, j, v = bad[0]
        raise EntryOutOfBox(f"元素 ({i},{j}) = {v} 不在 [0, 1]（共 {len(bad)} 個）")


def report_from_norm_sq(n: int, norm_sq: Fraction) -> BoundReport:
    c = classify_case(n)
    b = lower_bound_sq(n)
    margin = norm_sq - b
    return BoundReport(
        n=n, case=c.case, bound_sq=b, norm_sq=norm_sq,
        satisfied=margin >= 0, equality=margin == 0, margin=margin,
        paper_scope=c.paper_scope, exact=True,
    )


def check_bound(A: RationalMatrix) -> BoundReport:
    """精確計算 ‖A⁻¹‖_F² 並與下界比較；奇異 → SingularMatrix，出界 → EntryOutOfBox"""
    _check_box(A)
    return report_from_norm_sq(A.n, inverse_norm_sq(A))


def check_bound_float(n: int, norm_sq: float, tol: float = EQUALITY_TOL) -> BoundReport:
    """抽樣路徑：浮點比較；margin < tol 只標記候選（交給精確路徑裁決），不宣稱等號"""
    c = classify_case(n)
    b = lower_bound_sq(n)
    margin = float(norm_sq) - float(b)
    return BoundReport(
        n=n, case=c.case, bound_sq=b, norm_sq=float(norm_sq),
        satisfied=margin >= 0, equality=False, margin=margin,
        paper_scope=c.paper_scope, exact=False,
        equality_candidate=margin < tol,
    )
