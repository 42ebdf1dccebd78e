import random
from fractions import Fraction

from isoclinic import airy, connection, hitchin, liealg, oper
from isoclinic.connection import (
    ExpAtom,
    FormalConnection,
    GSeries,
    apply_atom,
    reduce_to_canonical,
)

F = Fraction


def _a1_oper_connection():
    algebra = liealg.build_algebra("A1")
    op = oper.minimal_oper_form(algebra, 1, 2, {(1, 2): F(1)})
    return algebra, op


def test_a1_reduction_oracle():
    # d + (f + t^-3 e)dt has slope 1/2 and is isoclinic
    algebra, op = _a1_oper_connection()
    cf = oper.oper_to_canonical(op)
    assert cf.slope == F(1, 2)
    assert cf.ramification == 2
    assert connection.is_isoclinic(cf)
    assert len(cf.irregular) == 1 and cf.irregular[0][0] == -1


def test_reduction_preserves_local_hitchin():
    # the canonical form has the same invariant (Hitchin) series as the
    # input connection: a gauge-invariance certificate for the reduction
    algebra, op = _a1_oper_connection()
    conn = oper.oper_connection(op, 2)
    cf = oper.oper_to_canonical(op)
    hp_in = hitchin.local_hitchin(conn.coeff.truncate(10))
    hp_out = hitchin.local_hitchin(cf.to_connection(precision=5).coeff)
    i = 1
    for k, c in hp_out.components[i].terms.items():
        assert hp_in.components[i].terms.get(k, F(0)) == c


def test_exp_gauge_invariance():
    # conjugating the input by exp(z u^k) does not change the canonical form
    algebra, op = _a1_oper_connection()
    conn = oper.oper_connection(op, 2)
    conn = FormalConnection(algebra, conn.coeff.truncate(12))
    cf0, _ = reduce_to_canonical(conn)
    rng = random.Random(11)
    for _ in range(3):
        z = algebra.scale(algebra.basis_element(rng.choice([1, 2])), F(rng.randint(1, 3)))
        gauged = apply_atom(conn, ExpAtom(z, rng.randint(1, 3)))
        cf1, _ = reduce_to_canonical(gauged)
        assert connection.irregular_part_equal(cf0, cf1)


def test_reduction_idempotent():
    algebra, op = _a1_oper_connection()
    cf = oper.oper_to_canonical(op)
    again, _ = reduce_to_canonical(cf.to_connection(precision=6))
    assert connection.irregular_part_equal(cf, again)


def test_refined_leading_terms_isoclinic():
    algebra, op = _a1_oper_connection()
    cf = oper.oper_to_canonical(op)
    rd = connection.refined_leading_terms(cf)
    assert rd.break_set == (1,)
    assert rd.slopes == (F(1, 2),)
    assert rd.terms == (cf.irregular[0][1],)
    assert rd.generic


def test_shear_handles_nonregular_nilpotent_leading():
    # the A2 Airy restriction leads with the highest-root vector, which is
    # nilpotent and not regular; the reduction must agree with the oper route
    algebra = liealg.build_algebra("A2")
    gc = airy.ks_airy(algebra)
    fc = airy.restrict_to_zero(gc)
    h = algebra.coxeter_number
    conn = FormalConnection(algebra, fc.coeff.truncate(h * (2 * h + 1)))
    cf1, _ = reduce_to_canonical(conn)
    cf2 = oper.oper_to_canonical(airy.airy_minimal_oper(algebra, 1))
    assert cf1.ramification == cf2.ramification
    assert cf1.irregular == cf2.irregular


def test_deep_oper_connection_reduces_like_oper():
    # reducing the raw (un-gauged) oper connection goes through the
    # Newton-polygon shear and must land on the same canonical form
    algebra = liealg.build_algebra("A2")
    op = oper.minimal_oper_form(algebra, 4, 3, {(2, 6): F(2)}, {(1, 3): F(1, 3)})
    cf_ref = oper.oper_to_canonical(op)
    raw = oper.oper_connection(op, 3)
    cf, _ = reduce_to_canonical(FormalConnection(algebra, raw.coeff.truncate(80)))
    assert cf.ramification == cf_ref.ramification
    assert cf.irregular == cf_ref.irregular
