"""JSON wire formats.

Rationals print as "p/q", cyclotomic scalars as {"order": L, "coeffs":
["p/q", ...]}, series as {"ramification", "terms", "precision"}.  All
encoders sort keys so that identical inputs give byte-identical output.
The optional float field mode converts scalars to floats on output only;
decoding always targets exact arithmetic.
"""

from __future__ import annotations

from fractions import Fraction

from . import liealg
from .connection import CanonicalForm, FormalConnection, GSeries
from .errors import SchemaError
from .scalars import Cyc, CycField, to_complex
from .series import INF, PuiseuxSeries


# ---------------------------------------------------------------------------
# scalars


def encode_scalar(x, field="exact"):
    if field == "float":
        z = to_complex(x)
        return z.real if abs(z.imag) < 1e-12 else [z.real, z.imag]
    if isinstance(x, Cyc):
        return {
            "order": x.field.order,
            "coeffs": [encode_scalar(c) for c in x.coeffs],
        }
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}" if x.denominator != 1 else str(x.numerator)


def decode_scalar(obj):
    if isinstance(obj, bool):
        raise SchemaError(f"not a scalar: {obj!r}")
    if isinstance(obj, int):
        return Fraction(obj)
    if isinstance(obj, str):
        try:
            return Fraction(obj)
        except (ValueError, ZeroDivisionError) as exc:
            raise SchemaError(f"bad rational {obj!r}: {exc}") from None
    if isinstance(obj, dict):
        try:
            field = CycField(int(obj["order"]))
            coeffs = [decode_scalar(c) for c in obj["coeffs"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise SchemaError(f"bad cyclotomic scalar: {exc}") from None
        if any(isinstance(c, Cyc) for c in coeffs):
            raise SchemaError("cyclotomic coefficients must be rational")
        return Cyc(field, field._reduce([Fraction(c) for c in coeffs]))
    raise SchemaError(f"not a scalar: {obj!r}")


def encode_vector(vec, field="exact"):
    return [encode_scalar(c, field) for c in vec]


def decode_vector(obj, dim=None):
    if not isinstance(obj, list):
        raise SchemaError("vector must be a list")
    if dim is not None and len(obj) != dim:
        raise SchemaError(f"vector length {len(obj)} != {dim}")
    return tuple(decode_scalar(c) for c in obj)


# ---------------------------------------------------------------------------
# series


def encode_precision(p):
    return "inf" if p == INF else p


def decode_precision(obj):
    if obj in ("inf", None):
        return INF
    if isinstance(obj, int):
        return obj
    raise SchemaError(f"bad precision {obj!r}")


def encode_series(s: PuiseuxSeries, field="exact"):
    return {
        "ramification": s.ramification,
        "terms": {str(k): encode_scalar(c, field) for k, c in sorted(s.terms.items())},
        "precision": encode_precision(s.precision),
    }


def decode_series(obj) -> PuiseuxSeries:
    try:
        ram = int(obj["ramification"])
        terms = {int(k): decode_scalar(c) for k, c in obj.get("terms", {}).items()}
    except (KeyError, TypeError, ValueError, AttributeError) as exc:
        raise SchemaError(f"bad series: {exc}") from None
    return PuiseuxSeries(ram, terms, decode_precision(obj.get("precision")))


def encode_gseries(s: GSeries, field="exact"):
    return {
        "ramification": s.ramification,
        "terms": {str(k): encode_vector(v, field) for k, v in sorted(s.terms.items())},
        "precision": encode_precision(s.precision),
    }


def decode_gseries(algebra, obj) -> GSeries:
    try:
        ram = int(obj["ramification"])
        terms = {
            int(k): decode_vector(v, algebra.dim) for k, v in obj.get("terms", {}).items()
        }
    except (KeyError, TypeError, ValueError, AttributeError) as exc:
        raise SchemaError(f"bad g-valued series: {exc}") from None
    return GSeries(algebra, ram, terms, decode_precision(obj.get("precision")))


# ---------------------------------------------------------------------------
# higher objects


def get_algebra(obj):
    try:
        name = obj["algebra"]
    except (KeyError, TypeError):
        raise SchemaError("missing 'algebra'") from None
    try:
        return liealg.build_algebra(name)
    except Exception as exc:
        raise SchemaError(f"unknown algebra {name!r}: {exc}") from None


def encode_oper(oper, field="exact"):
    return {
        "algebra": oper.algebra.cartan_type,
        "v": {f"{i},{j}": encode_scalar(c, field) for (i, j), c in oper.v},
    }


def decode_oper(obj):
    from .oper import OperForm

    algebra = get_algebra(obj)
    coeffs = {}
    for key, c in (obj.get("v") or {}).items():
        try:
            i, j = (int(p) for p in str(key).split(","))
        except ValueError:
            raise SchemaError(f"bad oper slot {key!r}") from None
        coeffs[(i, j)] = decode_scalar(c)
    return OperForm.from_dict(algebra, coeffs)


def encode_canonical_form(cf: CanonicalForm, field="exact"):
    return {
        "algebra": cf.algebra.cartan_type,
        "ramification": cf.ramification,
        "irregular": [[k, encode_vector(d, field)] for k, d in cf.irregular],
        "regular_term": encode_vector(cf.regular_term, field),
        "fully_reduced": cf.fully_reduced,
        "weakly_z_reduced": cf.weakly_z_reduced,
    }


def decode_canonical_form(obj) -> CanonicalForm:
    algebra = get_algebra(obj)
    try:
        irregular = tuple(
            (int(k), decode_vector(d, algebra.dim)) for k, d in obj["irregular"]
        )
        ram = int(obj["ramification"])
        regular = decode_vector(obj.get("regular_term", [0] * algebra.dim), algebra.dim)
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaError(f"bad canonical form: {exc}") from None
    return CanonicalForm(
        algebra=algebra,
        ramification=ram,
        irregular=irregular,
        regular_term=regular,
        fully_reduced=bool(obj.get("fully_reduced", True)),
        weakly_z_reduced=obj.get("weakly_z_reduced", "unverified"),
    )


def encode_hitchin_point(hp, field="exact"):
    return {
        "algebra": hp.algebra.cartan_type,
        "components": {str(i): encode_series(s, field) for i, s in sorted(hp.components.items())},
    }


def encode_character(char, field="exact"):
    return {
        "algebra": char.datum.algebra.cartan_type,
        "m": char.datum.m,
        "N": char.datum.N,
        "components": {
            str(i): encode_vector(v, field) for i, v in sorted(char.components.items())
        },
    }


def decode_character(obj):
    from . import ktype

    algebra = get_algebra(obj)
    try:
        m, n = int(obj["m"]), int(obj["N"])
        comps = {
            int(i): decode_vector(v, algebra.dim)
            for i, v in (obj.get("components") or {}).items()
        }
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaError(f"bad character: {exc}") from None
    datum = ktype.build_toral_datum(algebra, m, n)
    return ktype.make_character(datum, comps)


def encode_global_connection(gc, field="exact"):
    return {
        "algebra": gc.algebra.cartan_type,
        "chart": "t",
        "coefficient": {str(k): encode_vector(v, field) for k, v in sorted(gc.coeff.items())},
    }


def decode_global_connection(obj):
    from .airy import GlobalConnection

    algebra = get_algebra(obj)
    try:
        coeff = {
            int(k): decode_vector(v, algebra.dim)
            for k, v in (obj.get("coefficient") or {}).items()
        }
    except (TypeError, ValueError) as exc:
        raise SchemaError(f"bad global connection: {exc}") from None
    return GlobalConnection(algebra, coeff)
