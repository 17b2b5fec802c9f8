# modules/proof_suites.py
# -*- coding: utf-8 -*-
"""
verify-proof 背後的各組檢查。每一組回傳一個 dict：
    {"suite": 名稱, "passed": bool, "reason": 說明, ...細節}
全部跑完後由 run_suites 彙總成單一 verdict（全過才算過）。
"""
from __future__ import annotations

from fractions import Fraction

import numpy as np

from config import CASE2_SAMPLES, NON_ATTAIN_K_MAX, PROOF_CHUNK, PROOF_SAMPLES, WORKERS
from modules.bounds import classify_case
from modules.designs import cyclic_smatrix, is_prime, smatrix_of_order
from modules.errors import DataError, Finding, IdentityViolated, SingularMatrix
from modules.exact_linalg import RationalMatrix, identity
from modules.notifier import alert_finding, print_terminal
from modules.proof_kit import (
    build_proof_pair, expected_inner_product, verify_equality_case_odd, verify_trace_identity,
)
from modules.proof_maxima import (
    case2x2_bracket, case2x2_identity_residual, classify_2x2_equality, even_non_attainment_sweep,
    f_coefficients, f_max, f_second_derivative, f_value, f_value_via_norm, fd_second_derivative,
    g_coefficients, g_max, g_second_derivative, g_value, g_value_via_norm, quadratic_form_float,
    verify_f_max, verify_g_max,
)
from modules.worker_pool import run_chunks, split_range
from utils.random_matrices import random_invertible_rational, random_quadruple, rng_for

MAX_FAILURES_KEPT = 5
FLOAT_RESIDUAL_TOL = 1e-12
SECOND_DERIVATIVE_RTOL = 1e-6
BOX_SLACK = 1e-9
BOX_SAMPLES = 1000
FD_POINTS = 10

# rng_for(seed, STREAM, ...) 的第一個 key，各組互不重疊
STREAM_BOX = 1 << 20
STREAM_CASE2 = (1 << 20) + 1


def _suite(name: str, passed: bool, reason: str, **detail) -> dict:
    return {"suite": name, "passed": bool(passed), "reason": reason, **detail}


# ====== trace 恆等式 ======
def _trace_chunk(task) -> dict:
    n, seed, lo, hi = task
    c = classify_case(n)
    out = {"checked": 0, "redraws": 0, "tight": 0, "failures": [], "trace": None}
    for i in range(lo, hi):
        A, tries = random_invertible_rational(n, rng_for(seed, n, i))
        out["redraws"] += tries - 1
        try:
            trace = verify_trace_identity(build_proof_pair(A, c))
            if c.case == "odd" and f_value(A, c.k) != f_value_via_norm(A, c.k):
                raise IdentityViolated(f"n={n}: f 的兩種寫法不一致")
            if c.case == "even" and g_value(A, c.k) != g_value_via_norm(A, c.k):
                raise IdentityViolated(f"n={n}: g 的兩種寫法不一致")
        except Finding as e:
            out["failures"].append(f"#{i}: {e}")
            continue
        out["checked"] += 1
        out["tight"] += int(trace.cauchy_schwarz_tight)
        if out["trace"] is None:
            out["trace"] = {"source": f"sample_{i}", **trace.to_json()}
    return out


def _witness_trace(n: int) -> dict | None:
    """奇數 n 有 S-matrix 時，附上等號成立的那一份 ProofTrace"""
    try:
        S = smatrix_of_order(n).matrix
    except DataError:
        return None
    return {"source": f"smatrix_{n}", **verify_trace_identity(build_proof_pair(S, "odd")).to_json()}


def suite_trace(n: int, samples: int = PROOF_SAMPLES, seed: int = 0, workers: int = WORKERS) -> dict:
    """seed 固定 → 每個 n 抽到同一批有理數矩陣；chunk 大小固定，與 worker 數無關"""
    c = classify_case(n)
    if c.case not in ("odd", "even"):
        raise DataError(f"trace 恆等式需要 n ≥ 3，收到 {n}")
    tasks = [(n, seed, lo, hi) for lo, hi in split_range(samples, PROOF_CHUNK)]
    parts = run_chunks(_trace_chunk, tasks, workers, desc=f"trace n={n}")
    checked = sum(p["checked"] for p in parts)
    failures = [f for p in parts for f in p["failures"]]
    expected = expected_inner_product(c.case, n, c.k)
    traces = [p["trace"] for p in parts if p["trace"] is not None]
    if c.case == "odd":
        try:
            witness = _witness_trace(n)
        except Finding as e:
            failures.append(f"smatrix_{n}: {e}")
            witness = None
        if witness is not None:
            traces.insert(0, witness)
    return _suite(
        "trace_identity", not failures and checked == samples,
        f"⟨M,N⟩ = {expected}（{checked}/{samples}）" if not failures else failures[0],
        n=n, case=c.case, samples=samples, checked=checked,
        redraws=sum(p["redraws"] for p in parts),
        cauchy_schwarz_tight=sum(p["tight"] for p in parts),
        expected_inner_product=expected,
        failures=failures[:MAX_FAILURES_KEPT], failure_count=len(failures),
        traces=traces,
    )


# ====== f / g 最大值 ======
def suite_vertex_max(n: int) -> dict:
    rep = verify_f_max(n) if n % 2 == 1 else verify_g_max(n)
    name = "f_max" if rep.kind == "f" else "g_max"
    reason = f"max {rep.kind} = {rep.max_value}，每列 {rep.k} 個 1" if rep.passed else "；".join(rep.notes) or "最大值不符"
    detail = rep.to_json()
    detail.pop("passed")
    return _suite(name, rep.passed, reason, **detail)


def suite_box_maxima(n: int, samples: int = BOX_SAMPLES, seed: int = 0) -> dict:
    """
    頂點最大值推廣到整個 [0,1] 盒子：抽樣檢查 f ≤ n² / g ≤ g_max，
    另外用中央差分比對每個元素方向的二階導數（正的常數 → 逐元素凸）。
    """
    c = classify_case(n)
    if c.case == "odd":
        (a, b), top, second = f_coefficients(c.k), f_max(n), f_second_derivative(c.k)
    elif c.case == "even":
        (a, b), top, second = g_coefficients(c.k), g_max(c.k), g_second_derivative(c.k)
    else:
        raise DataError(f"f/g 需要 n ≥ 3，收到 {n}")
    rng = rng_for(seed, STREAM_BOX, n)
    X = rng.random((samples, n, n))
    vals = float(a) * np.sum(X * X, axis=(1, 2)) - float(b) * np.sum(X.sum(axis=2) ** 2, axis=1)
    observed = float(vals.max())

    worst = 0.0
    for _ in range(FD_POINTS):
        Y = rng.random((n, n))
        i, j = (int(v) for v in rng.integers(0, n, size=2))
        fd = fd_second_derivative(Y, i, j, float(a), float(b))
        worst = max(worst, abs(fd - float(second)) / float(second))

    vertex = np.zeros((n, n))
    vertex[:, :c.k] = 1.0
    at_vertex = quadratic_form_float(vertex, float(a), float(b))

    ok_box = observed <= float(top) + BOX_SLACK
    ok_fd = worst <= SECOND_DERIVATIVE_RTOL and second > 0
    return _suite(
        "box_maxima", ok_box and ok_fd,
        "盒內抽樣沒有超過頂點最大值，二階導數為正" if ok_box and ok_fd
        else ("盒內抽樣超過頂點最大值" if not ok_box else "二階導數與差分不符"),
        n=n, kind="f" if c.case == "odd" else "g", samples=samples,
        vertex_max=top, observed_max=observed, value_at_row_sums_k=at_vertex,
        second_derivative=second, fd_max_rel_error=worst,
    )


# ====== 偶數等號不可達 ======
def suite_non_attainment(k_max: int = NON_ATTAIN_K_MAX) -> dict:
    try:
        sweep = even_non_attainment_sweep(k_max)
    except IdentityViolated as e:
        return _suite("even_non_attainment", False, str(e), k_max=k_max)
    return _suite("even_non_attainment", True,
                  f"k = 2…{k_max}：k(k−1)/(2k−1) 都不是整數", **sweep)


# ====== 奇數等號鏈 ======
def _odd_witnesses(n_min: int, n_max: int) -> list:
    """(名稱, 矩陣)：Hadamard 導出的 S-matrix 與循環 S-matrix"""
    out = []
    for n in range(max(3, n_min), n_max + 1):
        if n % 2 == 0:
            continue
        try:
            out.append((f"smatrix_{n}", smatrix_of_order(n).matrix))
        except DataError:
            pass
        if is_prime(n) and n % 4 == 3:
            out.append((f"cyclic_{n}", cyclic_smatrix(n).matrix))
    return out


def suite_equality_chain(n_min: int, n_max: int) -> dict:
    results, failures = [], []
    for name, S in _odd_witnesses(n_min, n_max):
        # 列倒序 → 仍是 S-matrix，等號鏈一樣要成立
        flipped = RationalMatrix(tuple(reversed(S.rows)))
        for label, A in ((name, S), (f"{name}_rows_reversed", flipped)):
            try:
                ok = verify_equality_case_odd(A)
            except Finding as e:
                failures.append(f"{label}: {e}")
                continue
            results.append({"witness": label, "n": A.n, "equality": ok})
            if not ok:
                failures.append(f"{label}: 沒有達到等號")
    # 對照組：單位矩陣不會達到等號
    controls = []
    for n in range(max(3, n_min), n_max + 1):
        if n % 2 == 1:
            hit = verify_equality_case_odd(identity(n))
            controls.append({"witness": f"identity_{n}", "n": n, "equality": hit})
            if hit:
                failures.append(f"identity_{n}: 不該達到等號")
    return _suite(
        "equality_chain", not failures and bool(results),
        "S-matrix 全部達到等號且整條鏈成立" if not failures else failures[0],
        witnesses=results, controls=controls, failures=failures[:MAX_FAILURES_KEPT],
    )


# ====== 2×2 ======
def suite_case2(samples: int = CASE2_SAMPLES, seed: int = 0) -> dict:
    exact_bad = float_bad = 0
    worst_float = 0.0
    rng = rng_for(seed, STREAM_CASE2, 0)
    for _ in range(samples):
        q = random_quadruple(rng, exact=True)
        if case2x2_identity_residual(*q) != 0 or case2x2_bracket(*q) < 0:
            exact_bad += 1
    rng = rng_for(seed, STREAM_CASE2, 1)
    for _ in range(samples):
        try:
            r = abs(case2x2_identity_residual(*random_quadruple(rng, exact=False)))
        except SingularMatrix:
            continue
        worst_float = max(worst_float, r)
        float_bad += r >= FLOAT_RESIDUAL_TOL

    one, zero, half = Fraction(1), Fraction(0), Fraction(1, 2)
    witnesses = {
        "identity": classify_2x2_equality(one, zero, zero, one)["equality"],
        "swap": classify_2x2_equality(zero, one, one, zero)["equality"],
        "upper_half": classify_2x2_equality(one, half, zero, one)["equality"],
    }
    ok = exact_bad == 0 and float_bad == 0 and witnesses == {"identity": True, "swap": True, "upper_half": False}
    return _suite(
        "case2_identity", ok,
        "有理數殘差全為 0，浮點殘差 < 1e-12，等號只在 identity / swap" if ok else "2×2 恆等式或等號分類不符",
        samples=samples, exact_nonzero=exact_bad, float_over_tol=int(float_bad),
        float_max_abs_residual=worst_float, equality_witnesses=witnesses,
    )


# ====== 彙總 ======
def run_suites(n_min: int = 2, n_max: int = 8, seed: int = 0, samples: int = PROOF_SAMPLES,
               case: str = "all", k_max: int = NON_ATTAIN_K_MAX, case2_samples: int = CASE2_SAMPLES,
               workers: int = WORKERS) -> dict:
    if n_min < 1 or n_max < n_min:
        raise DataError(f"n 範圍不合法：{n_min}…{n_max}")
    if case not in ("all", "odd", "even", "two"):
        raise DataError(f"未知的 case：{case}")
    want = (lambda kind: case in ("all", kind))
    suites = []

    for n in range(max(3, n_min), n_max + 1):
        kind = "odd" if n % 2 == 1 else "even"
        if not want(kind):
            continue
        print_terminal(f"🔎 n={n}（{kind}）：trace 恆等式 / 頂點最大值 / 盒內抽樣")
        suites.append(suite_trace(n, samples, seed, workers))
        suites.append(suite_vertex_max(n))
        suites.append(suite_box_maxima(n, seed=seed))
    if want("even") and n_max >= 4:
        suites.append(suite_non_attainment(k_max))
    if want("odd") and n_max >= 3:
        suites.append(suite_equality_chain(n_min, n_max))
    if want("two") and n_min <= 2 <= n_max:
        suites.append(suite_case2(case2_samples, seed))

    return summarize(suites, seed=seed, n_min=n_min, n_max=n_max, case=case)


def summarize(suites: list, **params) -> dict:
    failed = [s["suite"] + (f"(n={s['n']})" if "n" in s else "") for s in suites if not s["passed"]]
    for name in failed:
        alert_finding(f"檢查失敗：{name}")
    if not failed:
        print_terminal(f"✅ {len(suites)} 組檢查全部通過")
    return {
        "params": params,
        "suites": suites,
        "passed": len(suites) - len(failed),
        "failed": len(failed),
        "failed_suites": failed,
        "verdict": "pass" if not failed else "fail",
    }
