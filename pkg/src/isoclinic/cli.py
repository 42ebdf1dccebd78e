"""Command-line front end: every operation with JSON input/output.

Usage: isoclinic GROUP COMMAND [--input FILE] [--output FILE]
                  [--field exact|float] [--precision P] [--seed S]

Exit codes: 0 success, 1 domain error (structured error JSON), 2 schema
error.  Output is byte-stable in exact mode (sorted keys).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import airy, connection, hitchin, jsonio, ktype, liealg, oper
from .errors import DomainError, SchemaError


def _read_input(args):
    if args.input and args.input != "-":
        with open(args.input) as fh:
            text = fh.read()
    elif not sys.stdin.isatty():
        text = sys.stdin.read()
    else:
        text = "{}"
    if not text.strip():
        return {}
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        # position-annotated message
        raise SchemaError(f"malformed JSON at line {exc.lineno} column {exc.colno}: {exc.msg}")


def _emit(args, payload):
    text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    if args.output and args.output != "-":
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _fraction(obj, name):
    try:
        return Fraction(obj)
    except (TypeError, ValueError, ZeroDivisionError):
        raise SchemaError(f"bad {name}: {obj!r}")


def _int(obj, name):
    if isinstance(obj, bool) or not isinstance(obj, int):
        raise SchemaError(f"{name} must be an integer, got {obj!r}")
    return obj


# ---------------------------------------------------------------------------
# handlers


def _cmd_algebra_info(args, data):
    algebra = jsonio.get_algebra(data)
    return {
        "algebra": algebra.cartan_type,
        "rank": algebra.rank,
        "dim": algebra.dim,
        "degrees": list(algebra.degrees),
        "coxeter_number": algebra.coxeter_number,
        "regular_elliptic": sorted(liealg.regular_elliptic_numbers(algebra)),
    }


def _cmd_oper_slope(args, data):
    op = jsonio.decode_oper(data)
    s = oper.oper_slope(op)
    return {"slope": f"{s.numerator}/{s.denominator}"}


def _cmd_oper_reduce(args, data):
    op = jsonio.decode_oper(data)
    cf = oper.oper_to_canonical(op, precision=args.precision)
    return jsonio.encode_canonical_form(cf, args.field)


def _cmd_oper_minimal(args, data):
    algebra = jsonio.get_algebra(data)
    n = _int(data.get("N"), "N")
    m = _int(data.get("m"), "m")

    def slots(obj):
        out = {}
        for key, c in (obj or {}).items():
            try:
                i, j = (int(p) for p in str(key).split(","))
            except ValueError:
                raise SchemaError(f"bad oper slot {key!r}")
            out[(i, j)] = jsonio.decode_scalar(c)
        return out

    op = oper.minimal_oper_form(algebra, n, m, slots(data.get("leading")), slots(data.get("lower")))
    return jsonio.encode_oper(op, args.field)


def _cmd_oper_invert(args, data):
    cf = jsonio.decode_canonical_form(data)
    op = oper.canonical_to_minimal_oper(cf, max_precision=args.precision)
    return jsonio.encode_oper(op, args.field)


def _cmd_conn_reduce(args, data):
    algebra = jsonio.get_algebra(data)
    series = jsonio.decode_gseries(algebra, data.get("coefficient") or {})
    if args.precision is not None:
        series = series.truncate(args.precision)
    elif series.precision == jsonio.INF:
        # exact input: truncate at the default working precision so the
        # staged reduction terminates
        depth = max(0, -min(series.terms, default=0))
        series = series.truncate(algebra.coxeter_number * (depth + series.ramification))
    cf, word = connection.reduce_to_canonical(connection.FormalConnection(algebra, series))
    out = jsonio.encode_canonical_form(cf, args.field)
    out["gauge_word_length"] = len(word)
    return out


def _cmd_conn_refined(args, data):
    cf = jsonio.decode_canonical_form(data)
    rd = connection.refined_leading_terms(cf)
    return {
        "break_set": list(rd.break_set),
        "slopes": [f"{r.numerator}/{r.denominator}" for r in rd.slopes],
        "terms": [jsonio.encode_vector(x, args.field) for x in rd.terms],
        "levi_dims": list(rd.levi_dims),
        "generic": rd.generic,
    }


def _cmd_ktype_build(args, data):
    algebra = jsonio.get_algebra(data)
    datum = ktype.build_toral_datum(
        algebra, _int(data.get("m"), "m"), _int(data.get("N"), "N")
    )
    lat = ktype.build_lattices(datum)
    return {
        "algebra": algebra.cartan_type,
        "m": datum.m,
        "N": datum.N,
        "Y": jsonio.encode_vector(datum.Y, args.field),
        "t_piece_dims": {str(r): len(datum.t_pieces[r]) for r in range(datum.m)},
        "tau_piece_dims": {str(r): len(datum.tau_pieces[r]) for r in range(datum.m)},
        "bj_dims": {str(i): len(b) for i, b in sorted(lat.bj_pieces.items())},
        "jprime_dims": {str(i): len(b) for i, b in sorted(lat.jprime_pieces.items())},
        "jplus_perp_dims": {str(i): len(b) for i, b in sorted(lat.jplus_perp_pieces.items())},
        "lagrangian_dim": len(lat.lagrangian),
    }


def _cmd_ktype_special(args, data):
    char = jsonio.decode_character(data)
    return {
        "special": ktype.special_check(char),
        "relevant": ktype.relevance_check(char),
    }


def _cmd_hitchin_map(args, data):
    algebra = jsonio.get_algebra(data)
    series = jsonio.decode_gseries(algebra, data.get("coefficient") or {})
    form = data.get("form", "du/u")
    hp = hitchin.local_hitchin(series, form=form)
    return jsonio.encode_hitchin_point(hp, args.field)


def _cmd_hitchin_verify_image(args, data):
    algebra = jsonio.get_algebra(data)
    datum = ktype.build_toral_datum(
        algebra, _int(data.get("m"), "m"), _int(data.get("N"), "N")
    )
    lat = ktype.build_lattices(datum)
    samples = data.get("samples", 20)
    report = hitchin.verify_hitchin_image(lat, samples=_int(samples, "samples"), seed=args.seed)
    report["lattice"] = {str(i): e for i, e in report["lattice"].items()}
    return report


def _cmd_hitchin_fibers(args, data):
    char = jsonio.decode_character(data)
    fiber = hitchin.fiber_over_phi(char)
    return {
        "size": len(fiber),
        "fiber": [jsonio.encode_character(c, args.field) for c in fiber],
        "same_image": hitchin.fiber_image_check(char),
    }


def _cmd_langlands_param(args, data):
    char = jsonio.decode_character(data)
    op, cf = hitchin.langlands_parameter(char)
    return {
        "oper": jsonio.encode_oper(op, args.field),
        "canonical": jsonio.encode_canonical_form(cf, args.field),
    }


def _cmd_airy_gen(args, data):
    algebra = jsonio.get_algebra(data)
    v_n = jsonio.decode_scalar(data.get("v_n", 1))
    lower = {
        _int(int(i), "index"): jsonio.decode_scalar(c)
        for i, c in (data.get("lower") or {}).items()
    }
    gc = airy.airy_family(algebra, v_n, lower)
    return jsonio.encode_global_connection(gc, args.field)


def _cmd_airy_infinity(args, data):
    gc = jsonio.decode_global_connection(data)
    nu = _fraction(data["nu"], "nu") if "nu" in data else None
    return airy.infinity_check(gc, nu)


def _cmd_verify_dim_match(args, data):
    algebra = jsonio.get_algebra(data)
    res = oper.dim_match_check(algebra, _int(data.get("m"), "m"), _int(data.get("N"), "N"))
    return {
        "algebra": algebra.cartan_type,
        "pass": res["pass"],
        "table": {str(l): list(pair) for l, pair in sorted(res["table"].items())},
    }


_HANDLERS = {
    ("algebra", "info"): _cmd_algebra_info,
    ("oper", "slope"): _cmd_oper_slope,
    ("oper", "reduce"): _cmd_oper_reduce,
    ("oper", "minimal"): _cmd_oper_minimal,
    ("oper", "invert"): _cmd_oper_invert,
    ("conn", "reduce"): _cmd_conn_reduce,
    ("conn", "refined-terms"): _cmd_conn_refined,
    ("ktype", "build"): _cmd_ktype_build,
    ("ktype", "special"): _cmd_ktype_special,
    ("hitchin", "map"): _cmd_hitchin_map,
    ("hitchin", "verify-image"): _cmd_hitchin_verify_image,
    ("hitchin", "fibers"): _cmd_hitchin_fibers,
    ("langlands", "param"): _cmd_langlands_param,
    ("airy", "gen"): _cmd_airy_gen,
    ("airy", "infinity"): _cmd_airy_infinity,
    ("verify", "dim-match"): _cmd_verify_dim_match,
}


def build_parser():
    parser = argparse.ArgumentParser(prog="isoclinic", description=__doc__)
    sub = parser.add_subparsers(dest="group", required=True)
    groups = {}
    for (group, cmd) in _HANDLERS:
        if group not in groups:
            gp = sub.add_parser(group)
            groups[group] = gp.add_subparsers(dest="command", required=True)
        cp = groups[group].add_parser(cmd)
        cp.add_argument("--input", "-i", default=None, help="input JSON file ('-' = stdin)")
        cp.add_argument("--output", "-o", default=None, help="output file (default stdout)")
        cp.add_argument(
            "--field",
            choices=["exact", "float"],
            default=os.environ.get("ISOCLINIC_FIELD", "exact"),
        )
        cp.add_argument("--precision", type=int, default=None)
        cp.add_argument("--seed", type=int, default=0)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    handler = _HANDLERS[(args.group, args.command)]
    try:
        data = _read_input(args)
        if not isinstance(data, dict):
            raise SchemaError("top-level input must be a JSON object")
        result = handler(args, data)
    except SchemaError as exc:
        _emit(args, {"error": {"type": "SchemaError", "message": str(exc)}})
        return 2
    except DomainError as exc:
        _emit(args, {"error": {"type": type(exc).__name__, "message": str(exc)}})
        return 1
    _emit(args, result)
    return 0


if __name__ == "__main__":
    sys.exit(main())
