import random
from fractions import Fraction

import pytest

from isoclinic import airy, jsonio, ktype, liealg, oper
from isoclinic.connection import GSeries
from isoclinic.errors import SchemaError
from isoclinic.scalars import Cyc, CycField
from isoclinic.series import INF, PuiseuxSeries

from helpers import random_character

F = Fraction


def test_scalar_round_trips():
    for x in (F(0), F(3), F(-7, 2)):
        assert jsonio.decode_scalar(jsonio.encode_scalar(x)) == x
    field = CycField(4)
    z = Cyc(field, field._reduce([F(1), F(-1, 2)]))
    assert jsonio.decode_scalar(jsonio.encode_scalar(z)) == z


def test_scalar_schema_errors():
    for bad in (True, None, [1], "3/0", "x", {"order": 4}):
        with pytest.raises(SchemaError):
            jsonio.decode_scalar(bad)


def test_float_field_mode():
    assert jsonio.encode_scalar(F(1, 2), "float") == 0.5
    field = CycField(4)
    i = Cyc(field, field._reduce([F(0), F(1)]))  # a primitive 4th root
    enc = jsonio.encode_scalar(i, "float")
    assert enc == [0.0, 1.0] or abs(enc[1] - 1.0) < 1e-12


def test_series_round_trip():
    s = PuiseuxSeries(2, {-3: F(1, 4), 1: F(2)}, 7)
    assert jsonio.decode_series(jsonio.encode_series(s)) == s
    exact = PuiseuxSeries(1, {0: F(1)}, INF)
    enc = jsonio.encode_series(exact)
    assert enc["precision"] == "inf"
    assert jsonio.decode_series(enc) == exact


def test_gseries_round_trip():
    algebra = liealg.build_algebra("A1")
    s = GSeries(algebra, 2, {-3: algebra.p_minus}, 5)
    out = jsonio.decode_gseries(algebra, jsonio.encode_gseries(s))
    assert out.terms == s.terms and out.precision == s.precision


def test_oper_round_trip():
    algebra = liealg.build_algebra("A2")
    op = oper.minimal_oper_form(algebra, 4, 3, {(2, 6): F(2)}, {(1, 3): F(1, 3)})
    assert jsonio.decode_oper(jsonio.encode_oper(op)) == op


def test_canonical_form_round_trip():
    algebra = liealg.build_algebra("A1")
    op = oper.minimal_oper_form(algebra, 3, 2, {(1, 4): F(1)})
    cf = oper.oper_to_canonical(op)
    back = jsonio.decode_canonical_form(jsonio.encode_canonical_form(cf))
    assert back.irregular == cf.irregular
    assert back.regular_term == cf.regular_term
    assert back.ramification == cf.ramification
    assert back.fully_reduced == cf.fully_reduced


def test_character_round_trip():
    rng = random.Random(13)
    datum = ktype.build_toral_datum(liealg.build_algebra("A1"), 2, 3)
    char = random_character(datum, rng)
    back = jsonio.decode_character(jsonio.encode_character(char))
    assert back.components == char.components
    assert back.datum.m == datum.m and back.datum.N == datum.N


def test_global_connection_round_trip():
    gc = airy.ks_airy(liealg.build_algebra("A2"))
    back = jsonio.decode_global_connection(jsonio.encode_global_connection(gc))
    assert back.coeff == gc.coeff


def test_unknown_algebra():
    with pytest.raises(SchemaError):
        jsonio.get_algebra({"algebra": "E8"})
    with pytest.raises(SchemaError):
        jsonio.get_algebra({})
