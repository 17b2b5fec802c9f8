# modules/search_common.py
# -*- coding: utf-8 -*-
from __future__ import annotations

from dataclasses import asdict, dataclass, field
from fractions import Fraction

from config import (
    ARMIJO_C, DESCEND_MAX_ITERS, DESCEND_STARTS, ENUM_MAX_ORDER, JITTER_RADIUS,
    MAX_RESTARTS, PG_TOL, SAMPLE_COUNT, WORKERS,
)
from modules.bounds import lower_bound_sq
from modules.errors import DataError, OrderTooLarge

BACKENDS = ("enumerate", "sample", "descend")
PLANTS = ("identity", "swap", "smatrix")
STARTS = ("random", "identity", "smatrix")


@dataclass(frozen=True)
class SearchConfig:
    n: int
    backend: str
    seed: int = 0
    sample_count: int = SAMPLE_COUNT
    starts: int = DESCEND_STARTS
    max_iters: int = DESCEND_MAX_ITERS
    armijo_c: float = ARMIJO_C
    pg_tol: float = PG_TOL
    jitter_radius: float = JITTER_RADIUS
    max_restarts: int = MAX_RESTARTS
    worker_count: int = WORKERS
    canonical: bool = False
    plant: tuple = ()
    start: str = "random"     # descend：random | smatrix | identity

    def __post_init__(self):
        if self.backend not in BACKENDS:
            raise DataError(f"未知 backend：{self.backend}（可用 {', '.join(BACKENDS)}）")
        if self.n < 2:
            raise DataError(f"n 必須 ≥ 2，收到 {self.n}")
        if self.backend == "enumerate" and self.n > ENUM_MAX_ORDER:
            raise OrderTooLarge(f"窮舉只支援 n ≤ {ENUM_MAX_ORDER}，收到 {self.n}")
        if self.seed < 0 or self.seed >= 2 ** 64:
            raise DataError(f"seed 必須是 64 位元非負整數，收到 {self.seed}")
        if self.sample_count < 1 or self.starts < 1 or self.max_iters < 0:
            raise DataError("sample_count / starts 必須 ≥ 1，max_iters ≥ 0")
        if self.worker_count < 1:
            raise DataError("worker_count 必須 ≥ 1")
        bad = [p for p in self.plant if p not in PLANTS]
        if bad:
            raise DataError(f"未知的 plant：{bad}（可用 {', '.join(PLANTS)}）")
        if self.start not in STARTS:
            raise DataError(f"未知的起點：{self.start}")
        object.__setattr__(self, "plant", tuple(self.plant))

    def to_json(self) -> dict:
        """worker_count 只影響速度，不寫進結果（換 worker 數輸出仍逐位元相同）"""
        d = asdict(self)
        d.pop("worker_count")
        d["plant"] = list(self.plant)
        return d


@dataclass
class SearchResult:
    n: int
    backend: str
    min_norm_sq: object             # 窮舉：Fraction；其他：float
    minimizers: list                # 矩陣（列的 list）
    minimizer_count: int
    examined: int
    singular: int
    violations: int
    config: dict
    extra: dict = field(default_factory=dict)

    @property
    def bound_sq(self) -> Fraction:
        return lower_bound_sq(self.n)

    @property
    def all_satisfy_bound(self) -> bool:
        return self.violations == 0

    def to_json(self) -> dict:
        m = self.min_norm_sq
        return {
            "n": self.n,
            "backend": self.backend,
            "min_norm_sq": str(m) if isinstance(m, Fraction) else (None if m is None else float(m)),
            "bound_sq": str(self.bound_sq),
            "minimizers": self.minimizers,
            "minimizer_count": self.minimizer_count,
            "examined": self.examined,
            "singular": self.singular,
            "violations": self.violations,
            "all_satisfy_bound": self.all_satisfy_bound,
            "config": self.config,
            "extra": self.extra,
        }
