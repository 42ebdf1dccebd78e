from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from isoclinic.errors import PrecisionUnderflow
from isoclinic.series import INF, PuiseuxSeries, match_ramification

F = Fraction


def S(terms, ram=1, prec=INF):
    return PuiseuxSeries(ram, {k: F(c) for k, c in terms.items()}, prec)


def test_product_oracle():
    # (1 + t)(1 - t) = 1 - t^2
    assert S({0: 1, 1: 1}) * S({0: 1, 1: -1}) == S({0: 1, 2: -1})


def test_precision_propagation():
    a = S({0: 1}, prec=3)
    b = S({1: 1}, prec=5)
    assert (a + b).precision == 3
    # multiplying by u^1 pushes b's precision window up
    assert (a * b).precision == 4
    with pytest.raises(PrecisionUnderflow):
        (a + b).coefficient(3)


def test_shift_truncate_residue():
    s = S({-2: 3, 0: 5, 1: 7})
    assert s.shift(2) == S({0: 3, 2: 5, 3: 7})
    assert s.truncate(1) == S({-2: 3, 0: 5}, prec=1)
    assert s.residue() == 5
    assert s.log_derivative() == S({-2: -6, 1: 7})


def test_ramification_round_trip():
    s = S({-1: 2, 3: F(1, 3)}, ram=2, prec=6)
    up = s.re_ramify(3)
    assert up.ramification == 6 and up.support() == [-3, 9]
    assert up.restrict(3) == s


def test_match_ramification_equality():
    # the same series presented at different ramifications compares equal
    assert S({1: 4}, ram=1) == S({2: 4}, ram=2)
    a, b = match_ramification(S({1: 1}, ram=2), S({1: 1}, ram=3))
    assert a.ramification == b.ramification == 6


def test_scalar_coercion():
    s = S({1: 2})
    assert 1 + s == S({0: 1, 1: 2})
    assert 1 - s == S({0: 1, 1: -2})
    assert 3 * s == S({1: 6})


small_series = st.builds(
    lambda terms: S(terms),
    st.dictionaries(st.integers(-4, 4), st.fractions(max_denominator=6), max_size=4),
)


@settings(max_examples=60, deadline=None)
@given(small_series, small_series, small_series)
def test_ring_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a + b == b + a
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == S({})


@settings(max_examples=40, deadline=None)
@given(small_series, small_series)
def test_log_derivative_is_a_derivation(a, b):
    lhs = (a * b).log_derivative()
    rhs = a.log_derivative() * b + a * b.log_derivative()
    assert lhs == rhs
