# main.py
# -*- coding: utf-8 -*-
"""
命令列入口：
    construct / check / verify-proof / enumerate / sample / descend / search <backend> / runs
stdout 只放 JSON（或 --format text 的表格），人看的訊息走 stderr。
exit code：0 全部通過；1 數學上的發現（下界被違反、恆等式不成立）；2 用法 / 資料錯誤。
"""
from __future__ import annotations

import argparse
import hashlib
import sys
import time

from config import (
    DESCEND_MAX_ITERS, DESCEND_STARTS, EIL_MAX_ORDER, NON_ATTAIN_K_MAX, CASE2_SAMPLES,
    PROOF_SAMPLES, RUNS_DB, SAMPLE_COUNT, TOOL_VERSION, WORKERS,
)
from modules.bounds import check_bound, classify_case
from modules.designs import (
    cyclic_smatrix, hadamard_of_order, paley, paley_ii, smatrix_from_hadamard,
    smatrix_of_order, sylvester,
)
from modules.errors import DataError, Finding, SingularMatrix
from modules.float_linalg import FloatMatrix
from modules.matrix_io import load_matrix, to_json_obj, to_text
from modules.notifier import alert_finding, print_terminal
from modules.proof_kit import equality_chain_odd
from modules.proof_suites import run_suites, suite_vertex_max, summarize
from modules.search_common import BACKENDS, PLANTS, STARTS, SearchConfig
from modules.search_descend import descend
from modules.search_enumerate import enumerate_binary
from modules.search_sample import sample_box
from storage.runs_db import RunManifest, log_run, recent_runs, runs_summary
from utils.others import dumps_report, render_text, save_json, save_text

EXIT_OK, EXIT_FINDING, EXIT_USAGE = 0, 1, 2


# ====== 子命令 ======
def cmd_construct(args) -> tuple:
    """回傳 (輸出文字, 報告 dict, verdict)"""
    sources = [s for s in ("order", "sylvester", "paley", "paley_ii", "cyclic") if getattr(args, s) is not None]
    if len(sources) != 1:
        raise DataError("construct 需要恰好一個：--order / --sylvester / --paley / --paley-ii / --cyclic")
    src, val = sources[0], getattr(args, sources[0])
    max_order = args.max_order

    if args.kind == "hadamard":
        if src == "cyclic":
            raise DataError("--cyclic 只用於 smatrix")
        H = {
            "order": hadamard_of_order, "sylvester": sylvester, "paley": paley, "paley_ii": paley_ii,
        }[src](val, max_order)
        A, meta = H.matrix, {"kind": "hadamard", "normalized": H.normalized}
    else:
        if src == "order":
            S = smatrix_of_order(val, max_order)
        elif src == "cyclic":
            S = cyclic_smatrix(val, max_order)
        else:
            S = smatrix_from_hadamard({"sylvester": sylvester, "paley": paley, "paley_ii": paley_ii}[src](val, max_order))
        A, meta = S.matrix, {"kind": "smatrix", "k": S.k}

    body = to_text(A) if args.format == "text" else dumps_report(to_json_obj(A, **meta))
    print_terminal(f"✅ {meta['kind']} 階數 {A.n} 建構完成並通過驗證（{src}={val}）")
    return body, to_json_obj(A, **meta), "pass"


def cmd_check(args) -> tuple:
    A = load_matrix(args.matrix)
    rep = check_bound(A)
    report = rep.to_json()
    if rep.case == "odd" and rep.equality:
        report["equality_chain"] = equality_chain_odd(A)
    if not rep.satisfied:
        alert_finding(f"n={A.n} 的矩陣違反下界：‖A⁻¹‖² = {rep.norm_sq} < {rep.bound_sq}")
        return report, "fail"
    tag = "等號成立" if rep.equality else "嚴格大於下界"
    print_terminal(f"✅ n={A.n}（{rep.case}）‖A⁻¹‖_F² = {rep.norm_sq}，下界² = {rep.bound_sq}，{tag}")
    return report, "pass"


def cmd_verify_proof(args) -> tuple:
    if args.f_max or args.g_max:
        if args.n is None:
            raise DataError("--f-max / --g-max 需要 --n")
        kind = classify_case(args.n).case
        if (args.f_max and kind != "odd") or (args.g_max and kind != "even"):
            raise DataError(f"n={args.n} 與 {'--f-max' if args.f_max else '--g-max'} 的奇偶不符")
        report = summarize([suite_vertex_max(args.n)], n=args.n)
    else:
        n_min, n_max = args.n_min, args.n_max
        if args.n is not None:
            n_min = n_max = args.n
        case2 = args.case2_samples
        if case2 is None:
            case2 = args.samples if args.case == "two" else CASE2_SAMPLES
        report = run_suites(
            n_min=n_min, n_max=n_max, seed=args.seed, samples=args.samples, case=args.case,
            k_max=args.k_max, case2_samples=case2, workers=args.workers,
        )
    return report, report["verdict"]


def _search_config(args, backend: str) -> SearchConfig:
    return SearchConfig(
        n=args.n, backend=backend, seed=args.seed,
        sample_count=getattr(args, "count", SAMPLE_COUNT),
        starts=getattr(args, "starts", DESCEND_STARTS),
        max_iters=getattr(args, "max_iters", DESCEND_MAX_ITERS),
        worker_count=args.workers,
        canonical=getattr(args, "canonical", False),
        plant=tuple(getattr(args, "plant", None) or ()),
        start=getattr(args, "start", "random"),
    )


def cmd_search(args) -> tuple:
    backend = args.backend
    config = _search_config(args, backend)
    if backend == "enumerate":
        result = enumerate_binary(config)
    elif backend == "sample":
        result = sample_box(config)
    else:
        A0 = FloatMatrix(load_matrix(args.start_file).to_float()) if getattr(args, "start_file", None) else None
        result = descend(config, A0)

    if result.violations:
        alert_finding(f"{backend} n={config.n}：{result.violations} 個違反下界")
    else:
        print_terminal(f"✅ {backend} n={config.n}：檢查 {result.examined} 個，最小 ‖A⁻¹‖² = {result.min_norm_sq}"
                       f"，下界² = {result.bound_sq}")
    return result.to_json(), "fail" if result.violations else "pass"


def cmd_runs(args) -> tuple:
    print_terminal(runs_summary(args.db))
    return {"runs": recent_runs(args.limit, args.db)}, "pass"


# ====== 參數 ======
def _add_common(p):
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.add_argument("--out", help="報告（或矩陣）寫到檔案，而不是 stdout")
    p.add_argument("--manifest", help="另外把執行清單寫成 JSON 檔")
    p.add_argument("--workers", type=int, default=WORKERS)
    p.add_argument("--seed", type=int, default=0)


def _add_search_args(p, backend: str):
    p.add_argument("--n", type=int, required=True)
    if backend == "enumerate":
        p.add_argument("--canonical", action="store_true", help="只列舉列遞增的代表元（權重 n!）")
    if backend == "sample":
        p.add_argument("--count", type=int, default=SAMPLE_COUNT)
        p.add_argument("--plant", choices=PLANTS, action="append", help="先精確檢查的見證矩陣，可重複")
    if backend == "descend":
        p.add_argument("--starts", type=int, default=DESCEND_STARTS)
        p.add_argument("--max-iters", type=int, default=DESCEND_MAX_ITERS)
        p.add_argument("--start", choices=STARTS, default="random")
        p.add_argument("--from", dest="start_file", help="起點矩陣檔（文字或 JSON）")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="main.py", description="S-matrix / ‖A⁻¹‖_F 下界檢查工具")
    parser.add_argument("--version", action="version", version=TOOL_VERSION)
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("construct", help="建構 Hadamard 矩陣或 S-matrix")
    p.add_argument("kind", choices=("hadamard", "smatrix"))
    p.add_argument("--order", type=int)
    p.add_argument("--sylvester", type=int, metavar="M")
    p.add_argument("--paley", type=int, metavar="Q")
    p.add_argument("--paley-ii", type=int, metavar="Q")
    p.add_argument("--cyclic", type=int, metavar="Q")
    p.add_argument("--max-order", type=int, default=EIL_MAX_ORDER)
    _add_common(p)
    p.set_defaults(handler=cmd_construct)

    p = sub.add_parser("check", help="精確檢查單一矩陣的下界")
    p.add_argument("matrix")
    _add_common(p)
    p.set_defaults(handler=cmd_check)

    p = sub.add_parser("verify-proof", help="逐步檢查證明中的恆等式與最大值")
    p.add_argument("--n-min", type=int, default=2)
    p.add_argument("--n-max", type=int, default=8)
    p.add_argument("--n", type=int)
    p.add_argument("--samples", type=int, default=PROOF_SAMPLES)
    p.add_argument("--case2-samples", type=int)
    p.add_argument("--case", choices=("all", "odd", "even", "two"), default="all")
    p.add_argument("--f-max", action="store_true")
    p.add_argument("--g-max", action="store_true")
    p.add_argument("--k-max", type=int, default=NON_ATTAIN_K_MAX)
    _add_common(p)
    p.set_defaults(handler=cmd_verify_proof)

    for backend in BACKENDS:
        p = sub.add_parser(backend, help=f"搜尋：{backend}")
        _add_search_args(p, backend)
        _add_common(p)
        p.set_defaults(handler=cmd_search, backend=backend)

    p = sub.add_parser("search", help="search <enumerate|sample|descend> …")
    bsub = p.add_subparsers(dest="backend", required=True)
    for backend in BACKENDS:
        bp = bsub.add_parser(backend)
        _add_search_args(bp, backend)
        _add_common(bp)
        bp.set_defaults(handler=cmd_search)

    p = sub.add_parser("runs", help="列出執行紀錄")
    p.add_argument("--limit", type=int, default=20)
    p.add_argument("--db", default=RUNS_DB)
    _add_common(p)
    p.set_defaults(handler=cmd_runs)
    return parser


# ====== 輸出 ======
def _emit(text: str, out: str | None):
    if out:
        save_text(out, text)
        print_terminal(f"💾 已寫入 {out}")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
        sys.stdout.flush()


def _params(args) -> dict:
    return {k: v for k, v in sorted(vars(args).items()) if k != "handler"}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    t0 = time.perf_counter()
    manifest = RunManifest(subcommand=args.subcommand if args.subcommand != "search" else f"search {args.backend}",
                           params=_params(args), seed=getattr(args, "seed", None), tool_version=TOOL_VERSION)
    try:
        if args.subcommand == "construct":
            text, report, verdict = cmd_construct(args)
        else:
            report, verdict = args.handler(args)
            text = render_text(report) if args.format == "text" else dumps_report(report)
        code = EXIT_OK if verdict == "pass" else EXIT_FINDING
        _emit(text, args.out)
        manifest.result_sha256 = hashlib.sha256(text.encode("utf-8")).hexdigest()
    except Finding as e:
        alert_finding(f"{type(e).__name__}: {e}")
        verdict, code = "finding", EXIT_FINDING
    except (DataError, SingularMatrix) as e:
        print_terminal(f"❌ {type(e).__name__}: {e}", quiet=False)
        verdict, code = "error", EXIT_USAGE
    except OSError as e:
        print_terminal(f"❌ I/O 失敗：{e}", quiet=False)
        verdict, code = "error", EXIT_USAGE

    manifest.wall_time = round(time.perf_counter() - t0, 6)
    manifest.verdict, manifest.exit_code = verdict, code
    try:
        if args.subcommand != "runs":
            log_run(manifest)
        if args.manifest:
            save_json(args.manifest, manifest.to_json())
    except Exception as e:
        print_terminal(f"⚠️ 執行紀錄寫入失敗：{e}")
    print_terminal(f"🧾 {manifest.subcommand} → {verdict}（exit {code}，{manifest.wall_time:.2f}s）")
    return code


if __name__ == "__main__":
    sys.exit(main())
