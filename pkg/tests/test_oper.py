import random
from fractions import Fraction

import pytest

from isoclinic import liealg, oper
from isoclinic.errors import DomainError, LeadingNotRegularSemisimple

from helpers import random_oper

F = Fraction


def test_ell_index_a1_oracle():
    # ell(1, j) = N + m(1 - j) for the degree-2 invariant; window [-N, -1]
    algebra = liealg.build_algebra("A1")
    idx = oper.ell_index(algebra, 3, 2)
    assert idx.ell_map() == {(1, 3): -1, (1, 4): -3}
    assert idx.a_tilde == {(1, 3), (1, 4)}
    assert idx.a_set == {(1, 3)}


def test_ell_index_coprimality():
    algebra = liealg.build_algebra("A1")
    with pytest.raises(DomainError):
        oper.ell_index(algebra, 2, 2)


def test_oper_slope_formula():
    algebra = liealg.build_algebra("A2")
    op = oper.OperForm.from_dict(algebra, {(2, 6): F(1), (1, 1): F(5)})
    # slope = max((j+1)/d_i - 1) = 7/3 - 1 = 4/3
    assert oper.oper_slope(op) == F(4, 3)
    assert oper.oper_slope(oper.OperForm.from_dict(algebra, {})) == F(0)


def test_dim_match_a2_oracle():
    algebra = liealg.build_algebra("A2")
    res = oper.dim_match_check(algebra, 3, 4)
    assert res["pass"]
    assert res["table"] == {-1: (1, 1), -2: (1, 1), -3: (0, 0)}


def test_minimal_oper_form_validation():
    algebra = liealg.build_algebra("A2")
    with pytest.raises(DomainError):
        oper.minimal_oper_form(algebra, 4, 3, {(2, 4): F(1)})
    with pytest.raises(LeadingNotRegularSemisimple):
        oper.minimal_oper_form(algebra, 4, 3, {(2, 6): F(0)})


def test_round_trip_exact():
    rng = random.Random(23)
    for name, N, m in (("A1", 3, 2), ("A2", 4, 3)):
        algebra = liealg.build_algebra(name)
        for _ in range(3):
            op = random_oper(algebra, N, m, rng)
            cf = oper.oper_to_canonical(op)
            back = oper.canonical_to_minimal_oper(cf)
            assert back == op


def test_fiber_independence_example():
    algebra = liealg.build_algebra("A1")
    base = {(1, 3): F(2), (1, 4): F(1)}
    op1 = oper.OperForm.from_dict(algebra, base)
    # slots with ell >= 0 for (N, m) = (3, 2): j <= 2
    op2 = oper.OperForm.from_dict(algebra, base | {(1, 1): F(7), (1, 2): F(-3)})
    assert oper.fiber_independence_check(op1, op2)
