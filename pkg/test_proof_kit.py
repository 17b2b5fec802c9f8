# test_proof_kit.py
from fractions import Fraction

import pytest

from modules.bounds import classify_case
from modules.designs import cyclic_smatrix, smatrix_of_order
from modules.errors import EntryOutOfBox, ParityMismatch, SingularMatrix
from modules.exact_linalg import RationalMatrix, identity, ones
from modules.proof_kit import (
    ScaledBlock, block_inner, blocks_equal, build_proof_pair, equality_chain_odd,
    rational_sqrt, verify_equality_case_odd, verify_trace_identity,
)
from modules.proof_suites import (
    run_suites, suite_box_maxima, suite_case2, suite_equality_chain, suite_non_attainment, suite_trace,
)
from utils.others import dumps_report
from utils.random_matrices import random_invertible_rational, rng_for

S3 = RationalMatrix(((1, 0, 1), (0, 1, 1), (1, 1, 0)))


def test_rational_sqrt():
    assert rational_sqrt(Fraction(9, 4)) == Fraction(3, 2)
    assert rational_sqrt(Fraction(2)) is None
    assert rational_sqrt(Fraction(-1)) is None


def test_pair_at_smatrix_is_equal():
    pair = build_proof_pair(S3, classify_case(3))
    assert pair.M.order == 4 and pair.N.order == 4
    assert blocks_equal(pair.M, pair.N)
    assert pair.M.materialize() == pair.N.materialize()


def test_pair_at_identity():
    pair = build_proof_pair(identity(3), "odd")
    assert not blocks_equal(pair.M, pair.N)
    assert pair.M.materialize() != pair.N.materialize()
    even = build_proof_pair(identity(4), "even")
    assert even.M.order == 5 and even.N.order == 5
    # k³/(k−1) = 8 不是完全平方 → 不能寫成有理數矩陣，但內積仍精確
    assert even.M.materialize() is None
    assert block_inner(even.M, even.N) == 28


def test_pair_errors():
    with pytest.raises(ParityMismatch):
        build_proof_pair(identity(3), "even")
    with pytest.raises(ParityMismatch):
        build_proof_pair(identity(2), "odd")
    with pytest.raises(SingularMatrix):
        build_proof_pair(ones(3), "odd")
    with pytest.raises(EntryOutOfBox):
        build_proof_pair(RationalMatrix(((2, 0, 0), (0, 1, 0), (0, 0, 1))), "odd")


@pytest.mark.parametrize("n,expected", [(3, 16), (5, 36), (4, 28), (6, Fraction(2 * 3 * 17, 2))])
def test_trace_identity_random(n, expected):
    rng = rng_for(3, n)
    for _ in range(5):
        A, _ = random_invertible_rational(n, rng)
        trace = verify_trace_identity(build_proof_pair(A, classify_case(n)))
        assert trace.inner_product_value == expected
        assert trace.cauchy_schwarz_holds
        assert trace.inverse_norm_sq >= trace.derived_bound_sq_on_inverse


def test_trace_identity_at_smatrix_is_tight():
    S7 = smatrix_of_order(7).matrix
    trace = verify_trace_identity(build_proof_pair(S7, "odd"))
    assert trace.inner_product_value == 64
    assert trace.cauchy_schwarz_tight and trace.pair_equal
    assert trace.inverse_norm_sq == trace.derived_bound_sq_on_inverse == Fraction(49, 16)


def test_scaled_block_norm():
    B = ScaledBlock(Fraction(0), identity(2), Fraction(4))
    assert B.norm_sq() == 0 + 4 + 4 * 2
    assert B.materialize() == RationalMatrix(((0, 1, 1), (1, 2, 0), (1, 0, 2)))


def test_equality_case_odd():
    assert verify_equality_case_odd(S3)
    assert not verify_equality_case_odd(identity(3))
    assert verify_equality_case_odd(smatrix_of_order(7).matrix)
    assert verify_equality_case_odd(cyclic_smatrix(11).matrix)
    with pytest.raises(ParityMismatch):
        verify_equality_case_odd(identity(4))


def test_equality_chain_steps():
    steps = equality_chain_odd(S3)
    assert all(steps.values())
    steps = equality_chain_odd(identity(3))
    assert not steps["M_equals_N"] and not steps["is_smatrix"]


def test_quick_suites():
    assert suite_trace(3, samples=20, seed=1)["passed"]
    assert suite_trace(4, samples=20, seed=1)["passed"]
    assert suite_box_maxima(5, samples=200)["passed"]
    assert suite_box_maxima(6, samples=200)["passed"]
    assert suite_non_attainment(500)["passed"]
    chain = suite_equality_chain(3, 7)
    assert chain["passed"]
    assert {w["witness"] for w in chain["witnesses"]} >= {"smatrix_3", "cyclic_3", "smatrix_7", "cyclic_7"}
    case2 = suite_case2(samples=500, seed=2)
    assert case2["passed"] and case2["exact_nonzero"] == 0


def test_trace_suite_is_seed_deterministic():
    a = suite_trace(5, samples=15, seed=9)
    b = suite_trace(5, samples=15, seed=9)
    assert a == b


def test_run_suites_small_range():
    report = run_suites(n_min=2, n_max=4, seed=0, samples=10, k_max=50, case2_samples=100)
    assert report["verdict"] == "pass"
    names = {s["suite"] for s in report["suites"]}
    assert {"trace_identity", "f_max", "g_max", "box_maxima", "even_non_attainment",
            "equality_chain", "case2_identity"} <= names


@pytest.mark.slow
def test_trace_identity_full_suite():
    for n in (3, 5, 7, 4, 6):
        res = suite_trace(n, samples=1000, seed=0)
        assert res["passed"] and res["checked"] == 1000


@pytest.mark.slow
def test_case2_full_suite():
    res = suite_case2(samples=10_000, seed=0)
    assert res["passed"]
    assert res["float_max_abs_residual"] < 1e-12


def test_trace_suite_reports_proof_traces():
    res = suite_trace(3, samples=20, seed=1)
    witness, first = res["traces"][0], res["traces"][1]
    assert len(res["traces"]) == 2
    assert witness["source"] == "smatrix_3"
    assert witness["inner_product_value"] == "16"
    assert witness["M_norm_sq"] == witness["N_norm_sq"] == "16"
    assert witness["derived_bound_sq_on_inverse"] == "9/4" and witness["cauchy_schwarz_tight"]
    assert first["source"] == "sample_0" and first["expected_inner_product"] == "16"

    even = suite_trace(4, samples=20, seed=1)
    assert [t["source"] for t in even["traces"]] == ["sample_0"]
    assert even["traces"][0]["inner_product_value"] == "28"
    assert "M_norm_sq" in even["traces"][0] and "N_norm_sq" in even["traces"][0]


def test_trace_suite_output_independent_of_workers():
    one = dumps_report(suite_trace(7, samples=300, seed=3, workers=1))
    four = dumps_report(suite_trace(7, samples=300, seed=3, workers=4))
    assert one == four
