# modules/search_sample.py
# -*- coding: utf-8 -*-
"""
在 D_n 上均勻抽樣檢查下界：
- 固定大小的 chunk，每個 chunk 用 rng_for(seed, chunk 編號) → 與 worker 數無關
- 浮點 LU 先算 ‖A⁻¹‖_F²；margin < EQUALITY_TOL 的升級成精確有理數檢查（浮點值本身就是精確的二進位有理數）
- plant：先精確檢查幾個已知的見證矩陣（identity / swap / smatrix）
"""
from __future__ import annotations

from dataclasses import replace
from fractions import Fraction

import numpy as np

from config import EQUALITY_TOL, SAMPLE_CHUNK
from modules.bounds import check_bound, check_bound_float, lower_bound_sq
from modules.designs import smatrix_of_order
from modules.errors import DataError, SingularMatrix
from modules.exact_linalg import RationalMatrix, identity
from modules.float_linalg import inverse_norm_sq_batch
from modules.notifier import alert_finding, print_terminal
from modules.search_common import SearchConfig, SearchResult
from modules.worker_pool import run_chunks, split_range
from utils.random_matrices import prng_metadata, rng_for


def exact_from_float(X: np.ndarray) -> RationalMatrix:
    return RationalMatrix(tuple(tuple(Fraction(float(v)) for v in row) for row in X))


def swap_matrix(n: int) -> RationalMatrix:
    """反對角置換矩陣；n=2 就是 [[0,1],[1,0]]"""
    return RationalMatrix(tuple(
        tuple(Fraction(1 if j == n - 1 - i else 0) for j in range(n)) for i in range(n)
    ))


def planted_witness(name: str, n: int) -> RationalMatrix:
    if name == "identity":
        return identity(n)
    if name == "swap":
        return swap_matrix(n)
    if name == "smatrix":
        return smatrix_of_order(n).matrix
    raise DataError(f"未知的 plant：{name}")


def _check_planted(config: SearchConfig) -> list:
    out = []
    for name in config.plant:
        try:
            rep = check_bound(planted_witness(name, config.n))
        except DataError as e:
            # 例：n 偶數沒有 S-matrix
            out.append({"plant": name, "skipped": str(e)})
            continue
        out.append({"plant": name, **rep.to_json()})
    return out


def _new_partial() -> dict:
    return {"best": None, "best_key": None, "best_matrix": None, "examined": 0, "singular": 0,
            "violations": 0, "escalated": 0, "equality": 0}


def _sample_chunk(task) -> dict:
    n, seed, chunk_idx, size, tol = task
    rng = rng_for(seed, chunk_idx)
    X = rng.random((size, n, n))
    norms, singular = inverse_norm_sq_batch(X)
    bound = float(lower_bound_sq(n))

    part = _new_partial()
    part["examined"] = size
    part["singular"] = int(singular.sum())

    # 向量化先篩，再逐筆交給浮點報告判斷是否升級
    for i in np.flatnonzero(~singular & (norms - bound < tol)):
        if not check_bound_float(n, float(norms[i]), tol).equality_candidate:
            continue
        part["escalated"] += 1
        try:
            rep = check_bound(exact_from_float(X[i]))
        except SingularMatrix:
            part["singular"] += 1
            norms[i] = np.inf
            continue
        if not rep.satisfied:
            part["violations"] += 1
        if rep.equality:
            part["equality"] += 1

    if np.isfinite(norms).any():
        i = int(np.argmin(norms))
        part.update(best=float(norms[i]), best_key=(chunk_idx, i), best_matrix=X[i].tolist())
    return part


def merge_partials(a: dict, b: dict) -> dict:
    """min 依 (值, chunk, 索引) 決定，計數相加"""
    out = {k: a[k] + b[k] for k in ("examined", "singular", "violations", "escalated", "equality")}
    pick = a
    if a["best"] is None or (b["best"] is not None and (b["best"], b["best_key"]) < (a["best"], a["best_key"])):
        pick = b
    out.update(best=pick["best"], best_key=pick["best_key"], best_matrix=pick["best_matrix"])
    return out


def sample_box(config: SearchConfig, tol: float = EQUALITY_TOL) -> SearchResult:
    if config.backend != "sample":
        config = replace(config, backend="sample")
    n = config.n
    planted = _check_planted(config)

    tasks = [(n, config.seed, c, hi - lo, tol)
             for c, (lo, hi) in enumerate(split_range(config.sample_count, SAMPLE_CHUNK))]
    parts = run_chunks(_sample_chunk, tasks, config.worker_count, desc=f"sample n={n}")
    acc = _new_partial()
    for p in parts:
        acc = merge_partials(acc, p)

    plant_violations = sum(1 for p in planted if "satisfied" in p and not p["satisfied"])
    violations = acc["violations"] + plant_violations
    if violations:
        alert_finding(f"n={n} 抽樣發現 {violations} 個低於下界的矩陣（seed={config.seed}）")
    else:
        print_terminal(f"✅ n={n} 抽樣 {config.sample_count} 筆，無違反下界（最小 {acc['best']}）")

    return SearchResult(
        n=n, backend="sample", min_norm_sq=acc["best"],
        minimizers=[acc["best_matrix"]] if acc["best_matrix"] is not None else [],
        minimizer_count=1 if acc["best_matrix"] is not None else 0,
        examined=acc["examined"] + len(planted),
        singular=acc["singular"],
        violations=violations,
        config=config.to_json(),
        extra={
            **prng_metadata(config.seed),
            "chunk_size": SAMPLE_CHUNK,
            "chunks": len(tasks),
            "escalated": acc["escalated"],
            "sample_equality_hits": acc["equality"],
            "minimizer_index": list(acc["best_key"]) if acc["best_key"] else None,
            "planted": planted,
            "equality_flagged": any(p.get("equality") for p in planted) or acc["equality"] > 0,
            "equality_tol": tol,
            "best_report": check_bound_float(n, acc["best"], tol).to_json() if acc["best"] is not None else None,
        },
    )
