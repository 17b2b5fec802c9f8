# test_search.py
from fractions import Fraction

import numpy as np
import pytest

import modules.search_descend as search_descend
import modules.search_enumerate as search_enumerate
from modules.designs import is_smatrix
from modules.errors import DataError, DimensionMismatch, OrderTooLarge, SingularIterate, SingularMatrix
from modules.exact_linalg import RationalMatrix
from modules.search_common import SearchConfig
from modules.search_descend import (
    descend, descend_one, fd_gradient, gradient_inv_norm_sq, gradient_rel_error, project,
    projected_gradient_norm,
)
from modules.search_enumerate import enumerate_binary, pattern_to_rows
from modules.search_sample import planted_witness, sample_box, swap_matrix
from utils.others import dumps_report
from utils.random_matrices import random_well_conditioned, rng_for


def _as_set(minimizers):
    return {tuple(tuple(r) for r in m) for m in minimizers}


# ====== SearchConfig ======
def test_config_validation():
    with pytest.raises(OrderTooLarge):
        SearchConfig(n=6, backend="enumerate")
    with pytest.raises(DataError):
        SearchConfig(n=3, backend="bogus")
    with pytest.raises(DataError):
        SearchConfig(n=1, backend="sample")
    with pytest.raises(DataError):
        SearchConfig(n=3, backend="sample", plant=("nope",))
    with pytest.raises(DataError):
        SearchConfig(n=3, backend="descend", start="zeros")
    cfg = SearchConfig(n=3, backend="sample", worker_count=4)
    assert "worker_count" not in cfg.to_json()


# ====== enumerate ======
def test_pattern_to_rows_order():
    assert pattern_to_rows(0b1001, 2) == ((1, 0), (0, 1))
    assert pattern_to_rows(0b0110, 2) == ((0, 1), (1, 0))


def test_enumerate_n2():
    res = enumerate_binary(SearchConfig(n=2, backend="enumerate"))
    assert res.min_norm_sq == 2
    assert _as_set(res.minimizers) == {((1, 0), (0, 1)), ((0, 1), (1, 0))}
    assert res.minimizer_count == 2
    assert res.examined == 16 and res.violations == 0
    assert res.extra["closed_under_symmetries"]


def test_enumerate_n3_minimizers_are_smatrices():
    res = enumerate_binary(SearchConfig(n=3, backend="enumerate"))
    assert res.min_norm_sq == Fraction(9, 4)
    assert res.minimizer_count == 6 and len(res.minimizers) == 6
    assert res.examined == 512 and res.violations == 0
    assert all(is_smatrix(RationalMatrix(tuple(map(tuple, m)))) for m in res.minimizers)
    assert res.extra["minimizers_all_smatrix"]
    assert res.extra["closed_under_symmetries"]


def test_enumerate_canonical_matches_plain():
    plain = enumerate_binary(SearchConfig(n=3, backend="enumerate"))
    canon = enumerate_binary(SearchConfig(n=3, backend="enumerate", canonical=True))
    assert canon.min_norm_sq == plain.min_norm_sq
    assert canon.minimizer_count == plain.minimizer_count
    assert canon.examined == plain.examined and canon.singular == plain.singular
    assert canon.extra["minimizer_classes"] == 1
    assert canon.minimizers == [[[0, 1, 1], [1, 0, 1], [1, 1, 0]]]


def test_enumerate_independent_of_chunks_and_workers(monkeypatch):
    base = enumerate_binary(SearchConfig(n=3, backend="enumerate")).to_json()
    monkeypatch.setattr(search_enumerate, "ENUM_CHUNK", 37)
    small = enumerate_binary(SearchConfig(n=3, backend="enumerate")).to_json()
    two = enumerate_binary(SearchConfig(n=3, backend="enumerate", worker_count=2)).to_json()
    for key in ("min_norm_sq", "minimizers", "minimizer_count", "examined", "singular", "violations"):
        assert small[key] == base[key] == two[key]
    assert small == two


@pytest.mark.slow
def test_enumerate_n4_stays_above_even_bound():
    res = enumerate_binary(SearchConfig(n=4, backend="enumerate"))
    assert res.min_norm_sq > Fraction(5, 2)
    assert res.violations == 0 and res.examined == 1 << 16


# ====== sample ======
def test_swap_and_planted():
    assert swap_matrix(2) == RationalMatrix(((0, 1), (1, 0)))
    assert planted_witness("identity", 3) == RationalMatrix(((1, 0, 0), (0, 1, 0), (0, 0, 1)))
    with pytest.raises(DataError):
        planted_witness("nope", 3)


def test_sample_is_reproducible():
    cfg = SearchConfig(n=3, backend="sample", seed=11, sample_count=3000)
    a, b = sample_box(cfg).to_json(), sample_box(cfg).to_json()
    assert a == b
    assert a["violations"] == 0 and a["examined"] == 3000
    assert a["min_norm_sq"] >= 2.25 - 1e-9


def test_sample_worker_count_does_not_change_output():
    one = sample_box(SearchConfig(n=3, backend="sample", seed=5, sample_count=5000))
    two = sample_box(SearchConfig(n=3, backend="sample", seed=5, sample_count=5000, worker_count=2))
    assert one.to_json() == two.to_json()


def test_sample_plants():
    res = sample_box(SearchConfig(n=2, backend="sample", sample_count=500, plant=("identity", "swap")))
    assert res.extra["equality_flagged"]
    assert [p["plant"] for p in res.extra["planted"]] == ["identity", "swap"]
    assert all(p["equality"] for p in res.extra["planted"])
    assert res.examined == 502 and res.violations == 0

    res = sample_box(SearchConfig(n=4, backend="sample", sample_count=500, plant=("smatrix",)))
    assert "skipped" in res.extra["planted"][0]
    assert res.violations == 0


def test_sample_even_order_above_bound():
    res = sample_box(SearchConfig(n=4, backend="sample", seed=2, sample_count=4000))
    assert res.violations == 0
    assert res.min_norm_sq >= 2.5 - 1e-9


def test_sample_best_report_and_escalation():
    res = sample_box(SearchConfig(n=3, backend="sample", seed=6, sample_count=2000))
    best = res.extra["best_report"]
    assert best["exact"] is False and best["equality"] is False
    assert best["bound_sq"] == "9/4" and best["margin"] >= 0 and best["satisfied"]
    assert best["norm_sq"] == res.min_norm_sq

    # tol = 0：只有浮點值低於下界才升級
    assert sample_box(SearchConfig(n=3, backend="sample", seed=6, sample_count=2000), tol=0.0).extra["escalated"] == 0
    wide = sample_box(SearchConfig(n=2, backend="sample", seed=6, sample_count=200), tol=1e9)
    assert wide.extra["escalated"] > 0 and wide.violations == 0


@pytest.mark.slow
def test_sample_full_run():
    for n in (3, 4, 5):
        res = sample_box(SearchConfig(n=n, backend="sample", seed=0, sample_count=100_000))
        assert res.violations == 0
        assert res.min_norm_sq >= float(res.bound_sq) - 1e-9


# ====== descend ======
def test_gradient_examples():
    assert np.allclose(gradient_inv_norm_sq(np.eye(3)), -2 * np.eye(3))
    assert np.allclose(gradient_inv_norm_sq(np.diag([1.0, 0.5])), np.diag([-2.0, -16.0]))


def test_gradient_matches_finite_difference():
    rng = rng_for(4, 0)
    for n in (2, 3, 5):
        A = random_well_conditioned(n, rng, 20.0)
        assert gradient_rel_error(A) < 1e-6
        assert fd_gradient(A).shape == (n, n)


def test_project_and_pg_norm():
    A = np.array([[1.5, -0.2], [0.3, 1.0]])
    assert np.array_equal(project(A), np.array([[1.0, 0.0], [0.3, 1.0]]))
    # 單位矩陣：梯度 −2I，往盒子外推 → 投影梯度為 0
    assert projected_gradient_norm(np.eye(2), -2 * np.eye(2)) == 0


def test_descend_from_smatrix_is_stationary():
    res = descend(SearchConfig(n=3, backend="descend", start="smatrix"))
    run = res.extra["runs"][0]
    assert abs(res.min_norm_sq - 2.25) < 1e-10
    assert run["converged"] and run["iterations"] == 0


def test_descend_from_identity_n2():
    res = descend(SearchConfig(n=2, backend="descend", start="identity"))
    assert abs(res.min_norm_sq - 2.0) < 1e-12
    assert res.violations == 0


def test_descend_random_starts():
    res = descend(SearchConfig(n=3, backend="descend", seed=7, starts=10, max_iters=200))
    assert res.examined == 10 and res.violations == 0
    assert res.extra["all_monotone"]
    assert all(r["terminal_value"] >= 2.25 - 1e-6 for r in res.extra["runs"])
    assert res.extra["gradient_self_test_rel_error"] < 1e-6


def test_descend_singular_start_is_jittered():
    cfg = SearchConfig(n=3, backend="descend", max_iters=20)
    run = descend_one(np.zeros((3, 3)), cfg, rng_for(0, 0))
    assert run.restarts >= 1 and np.isfinite(run.terminal_value)
    with pytest.raises(SingularIterate):
        descend_one(np.zeros((3, 3)), SearchConfig(n=3, backend="descend", max_restarts=0), rng_for(0, 0))


def test_descend_restarts_when_gradient_goes_singular(monkeypatch):
    real = search_descend.gradient_inv_norm_sq
    calls = {"n": 0}

    def flaky(A):
        calls["n"] += 1
        if calls["n"] == 1:
            raise SingularMatrix("pivot 太小")
        return real(A)

    monkeypatch.setattr(search_descend, "gradient_inv_norm_sq", flaky)
    cfg = SearchConfig(n=2, backend="descend", max_iters=200)
    run = descend_one(np.eye(2), cfg, rng_for(0, 0))
    assert run.restarts == 1 and run.breaks == [1]
    assert run.trace[0] == 2.0 and run.monotone
    assert np.isfinite(run.terminal_value) and run.terminal_value >= 2.0 - 1e-9
    assert run.to_json()["mid_run_restarts"] == 1

    def always(A):
        raise SingularMatrix("pivot 太小")

    monkeypatch.setattr(search_descend, "gradient_inv_norm_sq", always)
    with pytest.raises(SingularIterate):
        descend_one(np.eye(2), SearchConfig(n=2, backend="descend", max_restarts=3), rng_for(0, 0))


def test_descend_rejects_wrong_shape():
    with pytest.raises(DimensionMismatch):
        descend(SearchConfig(n=3, backend="descend"), A0=np.eye(2))


@pytest.mark.slow
@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_gradient_matches_finite_difference_full(n):
    rng = rng_for(0, n)
    errors = [gradient_rel_error(random_well_conditioned(n, rng, 20.0)) for _ in range(100)]
    assert max(errors) <= 1e-6


@pytest.mark.slow
def test_descend_hundred_starts_n3():
    res = descend(SearchConfig(n=3, backend="descend", seed=0, starts=100))
    assert res.examined == 100 and res.violations == 0
    assert res.extra["all_monotone"] and res.extra["all_converged"]
    assert all(r["terminal_value"] >= 2.25 - 1e-6 for r in res.extra["runs"])
    assert abs(res.min_norm_sq - 2.25) < 1e-6


@pytest.mark.slow
def test_enumerate_n4_independent_of_workers():
    one = dumps_report(enumerate_binary(SearchConfig(n=4, backend="enumerate")).to_json())
    four = dumps_report(enumerate_binary(SearchConfig(n=4, backend="enumerate", worker_count=4)).to_json())
    assert one == four


def test_sample_report_identical_across_four_workers():
    one = dumps_report(sample_box(SearchConfig(n=5, backend="sample", seed=1, sample_count=10_000)).to_json())
    four = dumps_report(sample_box(SearchConfig(
        n=5, backend="sample", seed=1, sample_count=10_000, worker_count=4)).to_json())
    assert one == four
