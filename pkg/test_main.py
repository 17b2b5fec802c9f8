# test_main.py
import hashlib
import json

import pytest

import main
from modules.designs import smatrix_of_order
from modules.exact_linalg import identity, ones
from modules.matrix_io import to_text
from modules.search_common import SearchResult
from storage.runs_db import RunManifest, log_run


@pytest.fixture(autouse=True)
def no_runs_db(monkeypatch):
    """測試不寫 storage/runs.db"""
    monkeypatch.setattr(main, "log_run", lambda manifest: None)


def _run(capsys, *argv):
    code = main.main(list(argv))
    out = capsys.readouterr().out
    return code, out


def _write(tmp_path, name, matrix):
    p = tmp_path / name
    p.write_text(to_text(matrix), encoding="utf-8")
    return str(p)


# ====== construct ======
def test_construct_smatrix(capsys):
    code, out = _run(capsys, "construct", "smatrix", "--order", "3")
    data = json.loads(out)
    assert code == 0
    assert data["kind"] == "smatrix" and data["n"] == 3 and data["k"] == 2
    assert data["entries"] == [["1", "0", "1"], ["0", "1", "1"], ["1", "1", "0"]]

    code, out = _run(capsys, "construct", "smatrix", "--order", "3", "--format", "text")
    assert code == 0 and out == "3\n1 0 1\n0 1 1\n1 1 0\n"


def test_construct_hadamard(capsys):
    code, out = _run(capsys, "construct", "hadamard", "--sylvester", "3")
    assert code == 0 and json.loads(out)["n"] == 8


def test_construct_errors(capsys):
    code, _ = _run(capsys, "construct", "hadamard", "--order", "6")
    assert code == 2
    code, _ = _run(capsys, "construct", "smatrix", "--order", "3", "--paley", "7")
    assert code == 2
    code, _ = _run(capsys, "construct", "hadamard", "--sylvester", "8", "--max-order", "64")
    assert code == 2


def test_usage_error_exits_2():
    with pytest.raises(SystemExit) as e:
        main.main(["construct"])
    assert e.value.code == 2


# ====== check ======
def test_check_smatrix_equality(capsys, tmp_path):
    path = _write(tmp_path, "s7.txt", smatrix_of_order(7).matrix)
    code, out = _run(capsys, "check", path)
    data = json.loads(out)
    assert code == 0
    assert data["equality"] and data["norm_sq"] == "49/16"
    assert all(data["equality_chain"].values())


def test_check_identity_even(capsys, tmp_path):
    code, out = _run(capsys, "check", _write(tmp_path, "i4.txt", identity(4)))
    data = json.loads(out)
    assert code == 0 and data["satisfied"] and not data["equality"]
    assert data["bound_sq"] == "5/2"


def test_check_bad_inputs(capsys, tmp_path):
    code, _ = _run(capsys, "check", _write(tmp_path, "j.txt", ones(3)))
    assert code == 2
    p = tmp_path / "box.txt"
    p.write_text("2\n2 0\n0 1\n", encoding="utf-8")
    code, _ = _run(capsys, "check", str(p))
    assert code == 2
    code, _ = _run(capsys, "check", str(tmp_path / "missing.txt"))
    assert code == 2


def test_check_text_format(capsys, tmp_path):
    code, out = _run(capsys, "check", _write(tmp_path, "i4.txt", identity(4)), "--format", "text")
    assert code == 0
    assert "bound_sq" in out and "5/2" in out


# ====== verify-proof ======
def test_verify_f_max(capsys):
    code, out = _run(capsys, "verify-proof", "--f-max", "--n", "31")
    data = json.loads(out)
    assert code == 0 and data["verdict"] == "pass"
    assert "961" in out


def test_verify_g_max_parity(capsys):
    code, _ = _run(capsys, "verify-proof", "--g-max", "--n", "5")
    assert code == 2


def test_verify_case_two(capsys):
    code, out = _run(capsys, "verify-proof", "--case", "two", "--samples", "200")
    data = json.loads(out)
    assert code == 0
    assert [s["suite"] for s in data["suites"]] == ["case2_identity"]
    assert data["suites"][0]["samples"] == 200


def test_verify_single_order(capsys):
    code, out = _run(capsys, "verify-proof", "--n", "3", "--samples", "20")
    data = json.loads(out)
    assert code == 0 and data["failed"] == 0
    assert {"trace_identity", "f_max", "box_maxima", "equality_chain"} <= {s["suite"] for s in data["suites"]}
    trace = next(s for s in data["suites"] if s["suite"] == "trace_identity")
    assert trace["traces"][0]["source"] == "smatrix_3"
    assert {"inner_product_value", "M_norm_sq", "N_norm_sq", "derived_bound_sq_on_inverse"} <= set(trace["traces"][0])


# ====== search ======
def test_enumerate_command(capsys):
    code, out = _run(capsys, "enumerate", "--n", "3")
    data = json.loads(out)
    assert code == 0
    assert data["min_norm_sq"] == "9/4" and data["minimizer_count"] == 6


def test_nested_search_command(capsys):
    code, out = _run(capsys, "search", "enumerate", "--n", "2")
    assert code == 0 and json.loads(out)["min_norm_sq"] == "2"


def test_sample_command_worker_independent(capsys):
    code1, out1 = _run(capsys, "sample", "--n", "3", "--count", "3000", "--seed", "4")
    code2, out2 = _run(capsys, "sample", "--n", "3", "--count", "3000", "--seed", "4", "--workers", "2")
    assert code1 == code2 == 0
    assert out1 == out2


def test_descend_command(capsys, tmp_path):
    code, out = _run(capsys, "descend", "--n", "3", "--start", "smatrix")
    assert code == 0 and abs(json.loads(out)["min_norm_sq"] - 2.25) < 1e-10
    start = _write(tmp_path, "i2.txt", identity(2))
    code, out = _run(capsys, "descend", "--n", "2", "--from", start)
    assert code == 0 and json.loads(out)["extra"]["start"] == "given"


def test_violation_exits_1(capsys, monkeypatch):
    def fake(config):
        return SearchResult(n=config.n, backend="enumerate", min_norm_sq=None, minimizers=[],
                            minimizer_count=0, examined=1, singular=0, violations=1, config=config.to_json())
    monkeypatch.setattr(main, "enumerate_binary", fake)
    code, out = _run(capsys, "enumerate", "--n", "3")
    assert code == 1
    assert json.loads(out)["violations"] == 1


# ====== 輸出 / 執行紀錄 ======
def test_out_and_manifest(capsys, tmp_path):
    out_path, man_path = tmp_path / "r.json", tmp_path / "m.json"
    code, out = _run(capsys, "enumerate", "--n", "2", "--out", str(out_path), "--manifest", str(man_path))
    assert code == 0 and out == ""
    text = out_path.read_text(encoding="utf-8").rstrip("\n")
    manifest = json.loads(man_path.read_text(encoding="utf-8"))
    assert manifest["result_sha256"] == hashlib.sha256(text.encode("utf-8")).hexdigest()
    assert manifest["verdict"] == "pass" and manifest["exit_code"] == 0
    assert manifest["subcommand"] == "enumerate" and manifest["params"]["n"] == 2


def test_runs_command(capsys, tmp_path):
    db = str(tmp_path / "runs.db")
    log_run(RunManifest(subcommand="check", params={"matrix": "a.txt"}, seed=0, tool_version="t",
                        verdict="pass"), db)
    code, out = _run(capsys, "runs", "--db", db)
    runs = json.loads(out)["runs"]
    assert code == 0 and len(runs) == 1 and runs[0]["subcommand"] == "check"
