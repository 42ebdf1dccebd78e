from fractions import Fraction

import pytest

from isoclinic import airy, connection, liealg, oper
from isoclinic.errors import LeadingNotRegularSemisimple, NotMinimalForm

F = Fraction


def test_ks_airy_a1_support():
    algebra = liealg.build_algebra("A1")
    gc = airy.ks_airy(algebra)
    # d + (t^-2 f + t^-3 e)dt
    assert gc.support() == [-3, -2]
    assert gc.coeff[-3] == algebra.basis_element(1)
    assert gc.coeff[-2] == algebra.p_minus
    # t^k dt = -s^(-k-2) ds: exponents {0, 1}, holomorphic at infinity
    assert gc.ds_exponents() == [0, 1]


def test_airy_slope():
    for name, s in (("A1", F(3, 2)), ("A2", F(4, 3)), ("G2", F(7, 6))):
        assert airy.airy_slope(liealg.build_algebra(name)) == s


def test_infinity_check():
    algebra = liealg.build_algebra("A1")
    gc = airy.ks_airy(algebra)
    report = airy.infinity_check(gc, nu=airy.airy_slope(algebra))
    assert report == {"regular": True, "trivial_monodromy": True, "nu_at_least_one": True}
    # a simple pole at infinity is regular but not trivial
    pole = airy.GlobalConnection(algebra, {-1: algebra.p_minus})
    assert airy.infinity_check(pole) == {"regular": True, "trivial_monodromy": False}
    worse = airy.GlobalConnection(algebra, {0: algebra.p_minus})
    assert not airy.infinity_check(worse)["regular"]


def test_restriction_slope_and_leading():
    for name in ("A1", "A2"):
        algebra = liealg.build_algebra(name)
        h = algebra.coxeter_number
        fc = airy.restrict_to_zero(airy.ks_airy(algebra))
        conn = connection.FormalConnection(algebra, fc.coeff.truncate(h * (2 * h + 1)))
        cf, _ = connection.reduce_to_canonical(conn)
        assert cf.slope == F(1 + h, h)
        assert connection.is_isoclinic(cf)


def test_globalize_restrict_round_trip():
    for name in ("A1", "A2"):
        algebra = liealg.build_algebra(name)
        op = airy.airy_minimal_oper(algebra, 1, {1: F(1, 2)})
        gc = airy.globalize(op, airy.airy_slope(algebra))
        assert gc.coeff == airy.airy_family(algebra, 1, {1: F(1, 2)}).coeff
        # restriction at the origin is gauge equivalent to the oper
        h = algebra.coxeter_number
        fc = airy.restrict_to_zero(gc)
        conn = connection.FormalConnection(algebra, fc.coeff.truncate(h * (2 * h + 1)))
        cf1, _ = connection.reduce_to_canonical(conn)
        cf2 = oper.oper_to_canonical(op)
        assert cf1.ramification == cf2.ramification
        assert cf1.irregular == cf2.irregular


def test_globalize_rejects_foreign_slots():
    algebra = liealg.build_algebra("A1")
    op = oper.OperForm.from_dict(algebra, {(1, 4): F(1), (1, 2): F(1)})
    with pytest.raises(NotMinimalForm):
        airy.globalize(op, F(3, 2))


def test_airy_family_rejects_singular_leading():
    algebra = liealg.build_algebra("A1")
    with pytest.raises(LeadingNotRegularSemisimple):
        airy.airy_family(algebra, 0, {})
