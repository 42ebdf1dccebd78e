import random
from fractions import Fraction

import pytest

from isoclinic import hitchin, ktype, liealg, linalg, oper
from isoclinic.connection import GSeries
from isoclinic.errors import NotRegularSemisimple

from helpers import rand_fraction, random_character

F = Fraction


def _algebra(name):
    return liealg.build_algebra(name)


def test_invariant_coordinates_a1_oracle():
    # for sl2, a e + b f is conjugate to f + (ab) e, so c_1 = ab
    algebra = _algebra("A1")
    e, f = algebra.basis_element(1), algebra.basis_element(2)
    for a, b in ((F(1), F(1)), (F(3), F(-2)), (F(1, 2), F(4))):
        x = algebra.add(algebra.scale(e, a), algebra.scale(f, b))
        assert hitchin.invariant_coordinates(algebra, x) == (a * b,)


@pytest.mark.parametrize("name", ["A1", "A2", "B2", "C2", "G2"])
def test_section_identity(name):
    # c(p_{-1} + sum c_i kb_i) = (c_i): the defining normalization
    algebra = _algebra(name)
    rng = random.Random(29)
    for _ in range(3):
        cs = [rand_fraction(rng) for _ in algebra.degrees]
        x = list(algebra.p_minus)
        for c, b in zip(cs, algebra.kostant_basis):
            x = linalg.vec_add(x, linalg.vec_scale(list(b), c))
        assert hitchin.invariant_coordinates(algebra, tuple(x)) == tuple(cs)


@pytest.mark.parametrize("name", ["A2", "G2"])
def test_invariant_coordinates_conjugation_invariant(name):
    algebra = _algebra(name)
    rng = random.Random(31)
    for _ in range(3):
        x = tuple(F(rng.randint(-2, 2)) for _ in range(algebra.dim))
        z = algebra.scale(algebra.basis_element(algebra.rank), F(rng.randint(1, 2)))
        g = liealg.exp_ad(algebra, z)
        gx = tuple(linalg.mat_vec(g, list(x)))
        assert hitchin.invariant_coordinates(algebra, x) == hitchin.invariant_coordinates(algebra, gx)


def test_local_hitchin_du_u_oracle():
    # (e + f) u^-3 du/u at ramification 2: c_1 = u^-6 = t^-3, and the
    # du/u -> (dt)^2 conversion multiplies by (2t)^-2, giving t^-5 / 4
    algebra = _algebra("A1")
    e, f = algebra.basis_element(1), algebra.basis_element(2)
    omega = GSeries(algebra, 2, {-3: algebra.add(e, f)})
    hp = hitchin.local_hitchin(omega)
    assert hp.components[1].terms == {-5: F(1, 4)}
    assert hp.coefficient(1, 4) == F(1, 4)


def test_local_hitchin_dt_oracle():
    # (f + t^-3 e)dt: c_1 = t^-3 directly in the (dt)^2 normalization
    algebra = _algebra("A1")
    e, f = algebra.basis_element(1), algebra.basis_element(2)
    omega = GSeries(algebra, 1, {0: f, -3: e})
    hp = hitchin.local_hitchin(omega, form="dt")
    assert hp.components[1].terms == {-3: F(1)}


def test_hitchin_image_lattice_a1_oracle():
    algebra = _algebra("A1")
    assert hitchin.hitchin_image_lattice(algebra, 3, 2) == {1: -5}


def test_verify_hitchin_image_a1():
    datum = ktype.build_toral_datum(_algebra("A1"), 2, 3)
    lat = ktype.build_lattices(datum)
    report = hitchin.verify_hitchin_image(lat, samples=10, seed=1)
    assert report["lattice"] == {1: -5}
    assert report["containment"]
    assert report["surjective"]
    assert report["jacobian_rank"] == report["targets"] == 5


def test_torus_stabilizer_a1_is_z2():
    datum = ktype.build_toral_datum(_algebra("A1"), 2, 3)
    scalars = hitchin.torus_stabilizer_scalars(datum)
    assert len(scalars) == 2
    # residue 1 carries the odd graded pieces; the stabilizer acts by +-1
    vals = [m[1] for m in scalars]
    assert all(v * v == 1 for v in vals)
    assert vals[0] != vals[1]


def test_fiber_over_phi_a1():
    rng = random.Random(41)
    datum = ktype.build_toral_datum(_algebra("A1"), 2, 3)
    char = random_character(datum, rng)
    fiber = hitchin.fiber_over_phi(char)
    assert len(fiber) == 2
    # the orbit is {phi, -phi}
    keys = {tuple(sorted((i, v) for i, v in c.components.items())) for c in fiber}
    minus = {i: tuple(-x for x in v) for i, v in char.components.items()}
    assert tuple(sorted(char.components.items())) in keys
    assert tuple(sorted(minus.items())) in keys
    assert hitchin.fiber_image_check(char)


def test_match_leading_terms_is_a_section_point():
    algebra = _algebra("A1")
    datum = ktype.build_toral_datum(algebra, 2, 3)
    dual = liealg.dual_algebra(algebra)
    rep = hitchin.match_leading_terms(dual, datum.Y)
    assert liealg.is_regular_semisimple(dual, rep)
    assert hitchin.invariant_coordinates(dual, rep) == hitchin.invariant_coordinates(dual, datum.Y)
    with pytest.raises(NotRegularSemisimple):
        hitchin.match_leading_terms(dual, dual.basis_element(dual.rank))


def test_langlands_parameter_a1():
    rng = random.Random(43)
    datum = ktype.build_toral_datum(_algebra("A1"), 2, 3)
    char = random_character(datum, rng)
    op, cf = hitchin.langlands_parameter(char)
    assert oper.oper_slope(op) == F(3, 2)
    assert cf.slope == F(3, 2)
    from isoclinic import connection

    assert connection.is_isoclinic(cf)
