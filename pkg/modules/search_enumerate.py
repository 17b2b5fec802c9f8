# modules/search_enumerate.py
# -*- coding: utf-8 -*-
"""
窮舉所有 {0,1} 矩陣（n ≤ ENUM_MAX_ORDER）：
- 位元樣式 p 的第 (i, j) 元素 = p 的第 n²−1−(i·n+j) 位 → p 的大小順序就是攤平後的字典序
- 每個矩陣走整數 fraction-free 路徑，奇異就跳過
- canonical=True：只看列嚴格遞增的矩陣（列置換的代表元），每個代表 n! 個矩陣
"""
from __future__ import annotations

from dataclasses import replace
from fractions import Fraction
from itertools import combinations, islice, permutations
from math import comb, factorial

from config import ENUM_CHUNK, MINIMIZER_SAMPLE
from modules.bounds import lower_bound_sq
from modules.designs import is_smatrix
from modules.exact_linalg import RationalMatrix, int_inverse_norm_sq
from modules.search_common import SearchConfig, SearchResult
from modules.worker_pool import run_chunks, split_range
from utils.canonical import canonical_form, int_to_row, transpose_rows


def _row_table(n: int) -> list:
    return [int_to_row(v, n) for v in range(1 << n)]


def pattern_to_rows(p: int, n: int, table=None) -> tuple:
    table = table or _row_table(n)
    mask = (1 << n) - 1
    return tuple(table[(p >> (n * (n - 1 - i))) & mask] for i in range(n))


def _new_partial() -> dict:
    return {"best": None, "count": 0, "keep": [], "examined": 0, "singular": 0, "below": 0}


def _offer(part: dict, key, value: Fraction, weight: int, cap):
    if part["best"] is None or value < part["best"]:
        part["best"], part["count"], part["keep"] = value, weight, [key]
    elif value == part["best"]:
        part["count"] += weight
        if key not in part["keep"] and (cap is None or len(part["keep"]) < cap):
            part["keep"].append(key)


def _scan_patterns(task) -> dict:
    n, lo, hi, cap = task
    bound = lower_bound_sq(n)
    table = _row_table(n)
    part = _new_partial()
    for p in range(lo, hi):
        v = int_inverse_norm_sq(pattern_to_rows(p, n, table))
        part["examined"] += 1
        if v is None:
            part["singular"] += 1
            continue
        if v < bound:
            part["below"] += 1
        _offer(part, p, v, 1, cap)
    return part


def _scan_canonical(task) -> dict:
    n, lo, hi, cap = task
    bound = lower_bound_sq(n)
    table = _row_table(n)
    w = factorial(n)
    part = _new_partial()
    for combo in islice(combinations(range(1 << n), n), lo, hi):
        rows = tuple(table[r] for r in combo)
        v = int_inverse_norm_sq(rows)
        part["examined"] += w
        if v is None:
            part["singular"] += w
            continue
        if v < bound:
            part["below"] += w
        if part["best"] is None or v <= part["best"]:
            _offer(part, canonical_form(rows), v, w, cap)
    return part


def merge_partials(a: dict, b: dict, cap) -> dict:
    """可結合、可交換：min、計數相加、保留的 key 取排序後前 cap 個"""
    out = {k: a[k] + b[k] for k in ("examined", "singular", "below")}
    if a["best"] is None or (b["best"] is not None and b["best"] < a["best"]):
        out.update(best=b["best"], count=b["count"], keep=list(b["keep"]))
    elif b["best"] is None or a["best"] < b["best"]:
        out.update(best=a["best"], count=a["count"], keep=list(a["keep"]))
    else:
        keep = sorted(set(a["keep"]) | set(b["keep"]))
        out.update(best=a["best"], count=a["count"] + b["count"], keep=keep if cap is None else keep[:cap])
    return out


def _closed_under_symmetries(minimizers: list) -> bool:
    """列置換、行置換、轉置下封閉（只對完整清單有意義）"""
    pool = {tuple(tuple(r) for r in m) for m in minimizers}
    for m in pool:
        n = len(m)
        if tuple(transpose_rows(m)) not in pool:
            return False
        for perm in permutations(range(n)):
            if tuple(m[p] for p in perm) not in pool:
                return False
            if tuple(tuple(r[p] for p in perm) for r in m) not in pool:
                return False
    return True


def enumerate_binary(config: SearchConfig) -> SearchResult:
    if config.backend != "enumerate":
        config = replace(config, backend="enumerate")
    n = config.n
    total = 1 << (n * n)
    cap = None if n <= 3 else MINIMIZER_SAMPLE

    if config.canonical:
        n_combos = comb(1 << n, n)
        tasks = [(n, lo, hi, cap) for lo, hi in split_range(n_combos, ENUM_CHUNK)]
        parts = run_chunks(_scan_canonical, tasks, config.worker_count, desc=f"enumerate n={n} (canonical)")
    else:
        tasks = [(n, lo, hi, cap) for lo, hi in split_range(total, ENUM_CHUNK)]
        parts = run_chunks(_scan_patterns, tasks, config.worker_count, desc=f"enumerate n={n}")

    acc = _new_partial()
    for p in parts:
        acc = merge_partials(acc, p, cap)

    if config.canonical:
        # 有重複列的矩陣沒列舉到，全部都是奇異
        skipped = total - acc["examined"]
        acc["examined"] += skipped
        acc["singular"] += skipped
        table = _row_table(n)
        minimizers = [[list(table[v]) for v in key] for key in acc["keep"]]
    else:
        table = _row_table(n)
        minimizers = [[list(r) for r in pattern_to_rows(p, n, table)] for p in acc["keep"]]

    complete = cap is None or acc["count"] <= len(minimizers)
    extra = {
        "canonical": config.canonical,
        "chunk_size": ENUM_CHUNK,
        "chunks": len(tasks),
        "minimizer_list_complete": bool(complete and not config.canonical),
        "minimizer_classes": len(minimizers) if config.canonical else None,
    }
    if n % 2 == 1 and minimizers:
        extra["minimizers_all_smatrix"] = all(is_smatrix(RationalMatrix(tuple(map(tuple, m)))) for m in minimizers)
    if extra["minimizer_list_complete"]:
        extra["closed_under_symmetries"] = _closed_under_symmetries(minimizers)

    return SearchResult(
        n=n, backend="enumerate", min_norm_sq=acc["best"],
        minimizers=minimizers, minimizer_count=acc["count"],
        examined=acc["examined"], singular=acc["singular"], violations=acc["below"],
        config=config.to_json(), extra=extra,
    )
