# modules/search_descend.py
# -*- coding: utf-8 -*-
"""
投影梯度下降：min h(A) = ‖A⁻¹‖_F²，A ∈ [0,1]^{n×n}
- 梯度 G = −2·A⁻ᵀA⁻¹A⁻ᵀ（啟動前一定先跟中央差分比對）
- Armijo 回溯（常數 ARMIJO_C，步長減半），投影 = 逐元素夾到 [0,1]
- 起點奇異或迭代中梯度奇異 → 加 JITTER_RADIUS 的均勻擾動重來，合計最多 MAX_RESTARTS 次
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from modules.bounds import check_bound, lower_bound_sq
from modules.designs import smatrix_of_order
from modules.errors import DimensionMismatch, IdentityViolated, SingularIterate, SingularMatrix
from modules.float_linalg import FloatMatrix, as_array, float_invert, inverse_norm_sq_float
from modules.notifier import alert_finding, print_terminal
from modules.search_common import SearchConfig, SearchResult
from modules.search_sample import exact_from_float
from modules.worker_pool import run_chunks
from utils.random_matrices import prng_metadata, random_well_conditioned, rng_for

FD_STEP = 1e-5
GRAD_RTOL = 1e-6
SELF_TEST_SAMPLES = 5
MIN_STEP = 1e-20
VIOLATION_TOL = 1e-9


def gradient_inv_norm_sq(A) -> np.ndarray:
    X = float_invert(A)
    return -2.0 * X.T @ X @ X.T


def fd_gradient(A, h: float = FD_STEP) -> np.ndarray:
    """中央差分，逐元素"""
    A = np.array(as_array(A), dtype=float)
    G = np.empty_like(A)
    for i in range(A.shape[0]):
        for j in range(A.shape[1]):
            Ap, Am = A.copy(), A.copy()
            Ap[i, j] += h
            Am[i, j] -= h
            G[i, j] = (inverse_norm_sq_float(Ap) - inverse_norm_sq_float(Am)) / (2 * h)
    return G


def gradient_rel_error(A, h: float = FD_STEP) -> float:
    G = gradient_inv_norm_sq(A)
    return float(np.linalg.norm(G - fd_gradient(A, h)) / np.linalg.norm(G))


def gradient_self_test(n: int, seed: int, samples: int = SELF_TEST_SAMPLES, max_cond: float = 20.0) -> float:
    """回傳最大相對誤差；超過 GRAD_RTOL 直接丟 IdentityViolated"""
    rng = rng_for(seed, 0xFFFF)
    worst = 0.0
    for _ in range(samples):
        worst = max(worst, gradient_rel_error(random_well_conditioned(n, rng, max_cond)))
    if worst > GRAD_RTOL:
        raise IdentityViolated(f"梯度自我檢查失敗：n={n} 相對誤差 {worst:.3e} > {GRAD_RTOL}")
    return worst


def project(A: np.ndarray) -> np.ndarray:
    return np.clip(A, 0.0, 1.0)


def projected_gradient_norm(A: np.ndarray, G: np.ndarray) -> float:
    return float(np.linalg.norm(A - project(A - G)))


def _safe_value(A: np.ndarray) -> float:
    try:
        return inverse_norm_sq_float(A)
    except SingularMatrix:
        return np.inf


@dataclass
class DescentRun:
    start_index: int
    terminal_value: float
    terminal: list
    iterations: int
    converged: bool
    restarts: int
    pg_norm: float
    trace: list = field(default_factory=list)
    breaks: list = field(default_factory=list)   # 中途重來後新段落的起始索引

    @property
    def monotone(self) -> bool:
        """每段內單調不增；重來處不算"""
        cuts = set(self.breaks)
        return all(b <= a for k, (a, b) in enumerate(zip(self.trace, self.trace[1:]), 1) if k not in cuts)

    def to_json(self) -> dict:
        return {
            "start_index": self.start_index,
            "terminal_value": self.terminal_value,
            "iterations": self.iterations,
            "converged": self.converged,
            "restarts": self.restarts,
            "pg_norm": self.pg_norm,
            "trace_length": len(self.trace),
            "monotone": self.monotone,
            "mid_run_restarts": len(self.breaks),
        }


def _jitter_until_regular(A: np.ndarray, config: SearchConfig, rng: np.random.Generator,
                          restarts: int, start_index: int):
    """加均勻擾動直到 h 有限；回傳 (A, h, restarts)"""
    h = _safe_value(A)
    while not np.isfinite(h):
        if restarts >= config.max_restarts:
            raise SingularIterate(f"起點 {start_index} 擾動 {restarts} 次仍奇異")
        A = project(A + rng.uniform(-config.jitter_radius, config.jitter_radius, size=A.shape))
        restarts += 1
        h = _safe_value(A)
    return A, h, restarts


def _gradient_or_restart(A, h, config, rng, restarts, start_index):
    """迭代中途梯度反矩陣奇異 → 擾動重來（同一個重來上限）"""
    while True:
        try:
            return A, h, restarts, gradient_inv_norm_sq(A)
        except SingularMatrix:
            if restarts >= config.max_restarts:
                raise SingularIterate(f"起點 {start_index} 迭代中奇異，已擾動 {restarts} 次")
            A = project(A + rng.uniform(-config.jitter_radius, config.jitter_radius, size=A.shape))
            A, h, restarts = _jitter_until_regular(A, config, rng, restarts + 1, start_index)


def descend_one(A0, config: SearchConfig, rng: np.random.Generator, start_index: int = 0) -> DescentRun:
    A = project(np.array(as_array(A0), dtype=float))
    A, h, restarts = _jitter_until_regular(A, config, rng, 0, start_index)

    trace = [h]
    breaks = []
    converged = False
    pg = np.inf
    it = 0
    while it < config.max_iters:
        before = restarts
        A, h, restarts, G = _gradient_or_restart(A, h, config, rng, restarts, start_index)
        if restarts != before:
            breaks.append(len(trace))
            trace.append(h)
        pg = projected_gradient_norm(A, G)
        if pg < config.pg_tol:
            converged = True
            break
        t = 1.0
        while t >= MIN_STEP:
            A_new = project(A - t * G)
            h_new = _safe_value(A_new)
            if h_new <= min(h, h - config.armijo_c * float(np.sum(G * (A - A_new)))):
                break
            t /= 2
        else:
            # 步長縮到底仍無法下降：數值上已停住
            break
        A, h = A_new, h_new
        trace.append(h)
        it += 1
    else:
        try:
            pg = projected_gradient_norm(A, gradient_inv_norm_sq(A))
            converged = pg < config.pg_tol
        except SingularMatrix:
            pg, converged = np.inf, False

    return DescentRun(start_index=start_index, terminal_value=h, terminal=A.tolist(), iterations=it,
                      converged=converged, restarts=restarts, pg_norm=pg, trace=trace, breaks=breaks)


def _start_matrix(config: SearchConfig, index: int, rng: np.random.Generator) -> np.ndarray:
    if config.start == "identity":
        return np.eye(config.n)
    if config.start == "smatrix":
        return smatrix_of_order(config.n).matrix.to_float()
    return rng.random((config.n, config.n))


def _descend_task(task) -> DescentRun:
    config, index, A0 = task
    rng = rng_for(config.seed, index)
    start = A0 if A0 is not None else _start_matrix(config, index, rng)
    return descend_one(start, config, rng, index)


def descend(config: SearchConfig, A0: FloatMatrix | None = None) -> SearchResult:
    if config.backend != "descend":
        config = replace(config, backend="descend")
    n = config.n
    grad_err = gradient_self_test(n, config.seed)

    # 固定起點只跑一次
    if A0 is not None:
        start = np.array(as_array(A0))
        if start.shape != (n, n):
            raise DimensionMismatch(f"起點矩陣 shape={start.shape}，但 n={n}")
        tasks = [(config, 0, start)]
    elif config.start != "random":
        tasks = [(config, 0, None)]
    else:
        tasks = [(config, i, None) for i in range(config.starts)]
    runs = run_chunks(_descend_task, tasks, config.worker_count, desc=f"descend n={n}")

    bound = float(lower_bound_sq(n))
    violations = 0
    for r in runs:
        if r.terminal_value < bound - VIOLATION_TOL:
            try:
                if not check_bound(exact_from_float(np.array(r.terminal))).satisfied:
                    violations += 1
            except SingularMatrix:
                pass
    best = min(runs, key=lambda r: (r.terminal_value, r.start_index))

    if violations:
        alert_finding(f"n={n} 梯度下降終點低於下界：{violations} 次（seed={config.seed}）")
    else:
        print_terminal(f"✅ n={n} 梯度下降 {len(runs)} 次，最小終值 {best.terminal_value:.12g}（下界² {bound:.12g}）")

    return SearchResult(
        n=n, backend="descend", min_norm_sq=best.terminal_value,
        minimizers=[best.terminal], minimizer_count=1,
        examined=len(runs), singular=sum(r.restarts for r in runs),
        violations=violations,
        config=config.to_json(),
        extra={
            **prng_metadata(config.seed),
            "gradient_self_test_rel_error": grad_err,
            "start": "given" if A0 is not None else config.start,
            "all_monotone": all(r.monotone for r in runs),
            "all_converged": all(r.converged for r in runs),
            "restarts": sum(r.restarts for r in runs),
            "runs": [r.to_json() for r in runs],
        },
    )
