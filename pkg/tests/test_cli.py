import json

import pytest

from isoclinic import cli


def run(tmp_path, argv, payload):
    src = tmp_path / "in.json"
    dst = tmp_path / "out.json"
    src.write_text(payload if isinstance(payload, str) else json.dumps(payload))
    code = cli.main(argv + ["--input", str(src), "--output", str(dst)])
    return code, json.loads(dst.read_text())


def test_oper_slope(tmp_path):
    code, out = run(tmp_path, ["oper", "slope"], {"algebra": "A1", "v": {"1,2": 1}})
    assert code == 0
    assert out == {"slope": "1/2"}


def test_verify_dim_match(tmp_path):
    code, out = run(tmp_path, ["verify", "dim-match"], {"algebra": "A2", "m": 3, "N": 4})
    assert code == 0
    assert out["pass"] is True
    assert out["table"] == {"-1": [1, 1], "-2": [1, 1], "-3": [0, 0]}


def test_malformed_json_exit_2(tmp_path):
    code, out = run(tmp_path, ["oper", "slope"], '{"algebra":')
    assert code == 2
    assert out["error"]["type"] == "SchemaError"
    assert "line" in out["error"]["message"]


def test_domain_error_exit_1(tmp_path):
    code, out = run(tmp_path, ["verify", "dim-match"], {"algebra": "A1", "m": 3, "N": 2})
    assert code == 1
    assert out["error"]["type"] == "DomainError"


def test_reduce_invert_round_trip(tmp_path):
    payload = {"algebra": "A1", "v": {"1,3": "2", "1,4": "1"}}
    code, cf = run(tmp_path, ["oper", "reduce"], payload)
    assert code == 0
    code, back = run(tmp_path, ["oper", "invert"], cf)
    assert code == 0
    assert back["v"] == payload["v"]


def test_conn_reduce_matches_oper_reduce(tmp_path):
    from isoclinic import jsonio, liealg, oper

    algebra = liealg.build_algebra("A1")
    op = jsonio.decode_oper({"algebra": "A1", "v": {"1,3": "2", "1,4": "1"}})
    series = jsonio.encode_gseries(oper.oper_connection(op, 2).coeff)
    code, cf1 = run(tmp_path, ["conn", "reduce"], {"algebra": "A1", "coefficient": series})
    code2, cf2 = run(tmp_path, ["oper", "reduce"], jsonio.encode_oper(op))
    assert code == code2 == 0
    assert cf1["irregular"] == cf2["irregular"]


def test_ktype_and_fibers(tmp_path):
    code, out = run(tmp_path, ["ktype", "build"], {"algebra": "A1", "m": 2, "N": 3})
    assert code == 0
    assert out["bj_dims"] == {"1": 1, "2": 0, "3": 1}
    char = {
        "algebra": "A1",
        "m": 2,
        "N": 3,
        "components": {"-3": out["Y"], "-1": out["Y"]},
    }
    code, fib = run(tmp_path, ["hitchin", "fibers"], char)
    assert code == 0
    assert fib["size"] == 2 and fib["same_image"] is True
    code, sp = run(tmp_path, ["ktype", "special"], char)
    assert code == 0
    assert sp == {"special": True, "relevant": True}


def test_byte_stable_output(tmp_path):
    payload = {"algebra": "A2", "v": {"2,6": "2", "1,3": "1/3"}}
    outs = []
    for i in range(2):
        src = tmp_path / f"in{i}.json"
        dst = tmp_path / f"out{i}.json"
        src.write_text(json.dumps(payload))
        assert cli.main(["oper", "reduce", "--input", str(src), "--output", str(dst)]) == 0
        outs.append(dst.read_bytes())
    assert outs[0] == outs[1]


def test_airy_pipeline(tmp_path):
    code, gc = run(tmp_path, ["airy", "gen"], {"algebra": "A2", "v_n": 1, "lower": {"1": "1/2"}})
    assert code == 0
    code, rep = run(tmp_path, ["airy", "infinity"], gc | {"nu": "4/3"})
    assert code == 0
    assert rep == {"regular": True, "trivial_monodromy": True, "nu_at_least_one": True}
