# test_bounds.py
import math
from fractions import Fraction

import pytest

from modules.bounds import (
    check_bound, check_bound_float, classify_case, lower_bound_sq, report_from_norm_sq,
)
from modules.designs import smatrix_of_order
from modules.errors import DataError, EntryOutOfBox, SingularMatrix
from modules.exact_linalg import RationalMatrix, identity, ones


@pytest.mark.parametrize("n,expected", [
    (3, Fraction(9, 4)),
    (4, Fraction(5, 2)),
    (2, Fraction(2)),
    (1, Fraction(1)),
    (5, Fraction(25, 9)),
    (6, Fraction(26, 9)),
])
def test_lower_bound_sq(n, expected):
    assert lower_bound_sq(n) == expected


def test_classify_case():
    assert classify_case(7).case == "odd" and classify_case(7).k == 4
    assert classify_case(8).case == "even" and classify_case(8).k == 4
    assert classify_case(2).case == "two"
    assert not classify_case(1).paper_scope and classify_case(3).paper_scope
    with pytest.raises(DataError):
        classify_case(0)


def test_odd_bound_strictly_increasing():
    odd = [lower_bound_sq(n) for n in range(3, 64, 2)]
    assert all(a < b for a, b in zip(odd, odd[1:]))


def test_check_bound_examples():
    rep = check_bound(identity(2))
    assert rep.satisfied and rep.equality and rep.margin == 0

    rep = check_bound(smatrix_of_order(3).matrix)
    assert rep.satisfied and rep.equality and rep.margin == 0

    rep = check_bound(RationalMatrix(((1, 0), (0, Fraction(1, 2)))))
    assert rep.norm_sq == 5 and rep.satisfied and not rep.equality

    rep = check_bound(identity(4))
    assert rep.norm_sq == 4 and rep.satisfied and not rep.equality
    assert not rep.sharp


def test_check_bound_errors():
    with pytest.raises(EntryOutOfBox):
        check_bound(RationalMatrix(((2, 0), (0, 1))))
    with pytest.raises(EntryOutOfBox):
        check_bound(RationalMatrix(((Fraction(-1, 3), 0), (0, 1))))
    with pytest.raises(SingularMatrix):
        check_bound(ones(2))


@pytest.mark.parametrize("n", [3, 7, 11, 15])
def test_every_smatrix_attains_equality(n):
    rep = check_bound(smatrix_of_order(n).matrix)
    assert rep.equality and rep.margin == 0 and rep.case == "odd"


def test_report_invariants():
    for norm_sq in (Fraction(9, 4), Fraction(3), Fraction(2)):
        rep = report_from_norm_sq(3, norm_sq)
        assert (not rep.equality) or rep.satisfied
        assert rep.satisfied == (rep.margin >= 0)


def test_float_report_flags_candidates():
    rep = check_bound_float(3, 2.25 + 1e-12)
    assert rep.satisfied and rep.equality_candidate and not rep.equality and not rep.exact
    rep = check_bound_float(3, 3.0)
    assert rep.satisfied and not rep.equality_candidate


def test_report_json_fields():
    data = check_bound(identity(4)).to_json()
    for key in ("n", "case", "bound_sq", "norm_sq", "satisfied", "equality", "margin", "paper_scope"):
        assert key in data
    assert data["bound_sq"] == "5/2"
    assert data["bound"] == pytest.approx(math.sqrt(10) / 2)
    assert data["margin"] == "3/2"
