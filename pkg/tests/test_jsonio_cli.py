import json
import random

import pytest

from nodal import ClassTuple, DivisionScalar, HereditaryOrder, TLaurent
from nodal import jsonio
from nodal.cli import main
from nodal.semisimple import AlgebraHom, SSAlgebra

from helpers import random_laurent, random_unit


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def tuple_file(tmp_path, name, payload):
    path = tmp_path / name
    path.write_text(json.dumps(payload))
    return str(path)


COMPLEX_NODE = {
    "version": 1,
    "chains": [{"tag": "cx", "len": 1}],
    "sim": [],
    "alpha": {"0:0": "ex"},
    "beta": {},
    "gamma": [],
    "wt": {"0:0": 1},
}


def test_laurent_json_round_trip():
    rng = random.Random(1)
    for tag in ("re", "cx", "tc", "qt"):
        for _ in range(20):
            f = random_laurent(rng, tag, 5, nonzero=False)
            data = jsonio.laurent_to_json(f)
            back = jsonio.laurent_from_json(data, 5)
            assert back == f
    zero = jsonio.laurent_from_json({"tag": "re", "offset": 0, "coeffs": []}, 4)
    assert zero.is_zero()


def test_matrix_json_round_trip():
    rng = random.Random(2)
    order = HereditaryOrder("tc", (1, 2), 6)
    u = random_unit(rng, order)
    data = jsonio.matrix_to_json(order, u)
    order2, mat = jsonio.matrix_from_json(data)
    assert order2 == order
    assert all(a == b for ra, rb in zip(u, mat) for a, b in zip(ra, rb))
    with pytest.raises(jsonio.SchemaError):
        jsonio.matrix_from_json({"tag": "re"})


def test_embedding_json_round_trip():
    C = SSAlgebra([(1, "co")])
    CC = SSAlgebra([(1, "co"), (1, "co")])
    diag = AlgebraHom.from_callable(C, CC, lambda x: (x[0], x[0]))
    data = jsonio.embedding_to_json(diag)
    back = jsonio.embedding_from_json(data)
    assert back == diag


def test_tuple_json_round_trip():
    mixed_chain = ClassTuple(
        [("re", 2)], {((0, 1), (0, 1))}, {(0, 0): "id"}, {(0, 1): "can"}, {},
        {("s", (0, 0)): 1, ("d+", (0, 1)): 2, ("d-", (0, 1)): 3},
    )
    data = jsonio.tuple_to_json(mixed_chain)
    back = jsonio.tuple_from_json(data)
    assert back == mixed_chain
    glued = ClassTuple(
        [("tc", 2)], {((0, 0), (0, 1))}, {}, {}, {((0, 0), (0, 1)): -1},
        {("g", (0, 0), (0, 1)): 2},
    )
    assert jsonio.tuple_from_json(jsonio.tuple_to_json(glued)) == glued
    with pytest.raises(jsonio.SchemaError):
        jsonio.tuple_from_json({"chains": []})  # missing version


def test_cli_validate(capsys, tmp_path):
    good = tuple_file(tmp_path, "good.json", COMPLEX_NODE)
    code, out, _ = run_cli(capsys, "validate", good)
    assert code == 0 and json.loads(out)["valid"]
    bad_payload = dict(COMPLEX_NODE)
    bad_payload["chains"] = [{"tag": "re", "len": 1}]
    bad = tuple_file(tmp_path, "bad.json", bad_payload)
    code, out, _ = run_cli(capsys, "validate", bad)
    assert code == 2
    parsed = json.loads(out)
    assert not parsed["valid"]
    assert any("(d)(i)" in e for e in parsed["errors"])


def test_cli_missing_file_and_bad_json(capsys, tmp_path):
    code, out, _ = run_cli(capsys, "validate", str(tmp_path / "absent.json"))
    assert code == 2
    broken = tmp_path / "broken.json"
    broken.write_text("{not json")
    code, out, _ = run_cli(capsys, "validate", str(broken))
    assert code == 2


def test_cli_canon_round_trip(capsys, tmp_path):
    path = tuple_file(tmp_path, "t.json", COMPLEX_NODE)
    code, out, _ = run_cli(capsys, "canon", path)
    assert code == 0
    first = json.loads(out)
    rep_path = tuple_file(tmp_path, "rep.json", first["representative"])
    code, out, _ = run_cli(capsys, "canon", rep_path)
    assert code == 0
    second = json.loads(out)
    assert first["key"] == second["key"]


def test_cli_equiv(capsys, tmp_path):
    base = {
        "version": 1,
        "chains": [{"tag": "cx", "len": 1}, {"tag": "cx", "len": 1}],
        "sim": [[[0, 0], [1, 0]]],
        "alpha": {},
        "beta": {},
        "gamma": [[[[0, 0], [1, 0]], 1]],
        "wt": {"0:0": 1},
    }
    other = json.loads(json.dumps(base))
    other["gamma"] = [[[[0, 0], [1, 0]], -1]]
    a = tuple_file(tmp_path, "a.json", base)
    b = tuple_file(tmp_path, "b.json", other)
    code, out, _ = run_cli(capsys, "equiv", a, b)
    assert code == 0 and json.loads(out)["equivalent"]
    # inequivalent pair: same-chain cx flip
    flip = {
        "version": 1,
        "chains": [{"tag": "cx", "len": 2}],
        "sim": [[[0, 0], [0, 1]]],
        "alpha": {},
        "beta": {},
        "gamma": [[[[0, 0], [0, 1]], 1]],
        "wt": {"0:0": 1},
    }
    flop = json.loads(json.dumps(flip))
    flop["gamma"] = [[[[0, 0], [0, 1]], -1]]
    c = tuple_file(tmp_path, "c.json", flip)
    d = tuple_file(tmp_path, "d.json", flop)
    code, out, _ = run_cli(capsys, "equiv", c, d)
    assert code == 1 and not json.loads(out)["equivalent"]


def test_cli_enumerate_deterministic(capsys):
    code, out1, _ = run_cli(capsys, "enumerate", "--max-elements", "1", "--basic")
    assert code == 0
    assert len(out1.strip().splitlines()) == 14
    code, out2, _ = run_cli(capsys, "enumerate", "--max-elements", "1", "--basic")
    assert out1 == out2
    for line in out1.strip().splitlines():
        parsed = json.loads(line)
        assert set(parsed) == {"key", "representative"}


def test_cli_basify(capsys, tmp_path):
    heavy = {
        "version": 1,
        "chains": [{"tag": "cx", "len": 1}],
        "sim": [],
        "alpha": {"0:0": "ex"},
        "beta": {},
        "gamma": [],
        "wt": {"0:0": 3},
    }
    path = tuple_file(tmp_path, "heavy.json", heavy)
    code, out, _ = run_cli(capsys, "basify", path)
    assert code == 0
    parsed = json.loads(out)
    assert parsed["tuple"]["wt"] == {"0:0": 1}
    light = tuple_file(tmp_path, "light.json", COMPLEX_NODE)
    code, out2, _ = run_cli(capsys, "canon", light)
    assert json.loads(out2)["key"] == parsed["key"]


def test_cli_build_and_verify(capsys, tmp_path):
    path = tuple_file(tmp_path, "t.json", COMPLEX_NODE)
    code, out, _ = run_cli(capsys, "build", path, "--trunc", "4")
    assert code == 0
    parsed = json.loads(out)
    assert parsed["dim_a"] == 7 and parsed["radical_dim"] == 6
    code, out, _ = run_cli(capsys, "verify", path, "--trunc", "4")
    assert code == 0 and json.loads(out)["all_pass"]


def test_cli_normal_form(capsys, tmp_path):
    order = HereditaryOrder("re", (1, 1), 8)
    data = jsonio.matrix_to_json(order, order.rotation())
    path = tmp_path / "rho.json"
    path.write_text(json.dumps(data))
    witness_path = tmp_path / "w.json"
    code, out, _ = run_cli(capsys, "normal-form", str(path),
                           "--witness", str(witness_path))
    assert code == 0
    assert json.loads(out) == {"d": 0, "k": 1}
    witness = json.loads(witness_path.read_text())
    assert witness["d"] == 0 and witness["k"] == 1
    _, g = jsonio.matrix_from_json(witness["g"])
    assert order.is_unit(g)
    # a non-normalizing matrix is a negative decision
    bad = jsonio.matrix_to_json(
        order,
        ((TLaurent.one("re"), TLaurent.zero("re")),
         (TLaurent.zero("re"), TLaurent.t_power("re", 1))),
    )
    bad_path = tmp_path / "bad.json"
    bad_path.write_text(json.dumps(bad))
    code, out, _ = run_cli(capsys, "normal-form", str(bad_path))
    assert code == 1


def test_cli_square_class(capsys, tmp_path):
    path = tmp_path / "s.json"
    path.write_text(json.dumps({"tag": "re", "offset": 2, "coeffs": [["-2"], ["1"]]}))
    code, out, _ = run_cli(capsys, "square-class", str(path))
    assert code == 0 and json.loads(out)["class"] == "-1"
    zero = tmp_path / "z.json"
    zero.write_text(json.dumps({"tag": "re", "offset": 0, "coeffs": []}))
    code, out, _ = run_cli(capsys, "square-class", str(zero))
    assert code == 2


def test_cli_decompose(capsys, tmp_path):
    C = SSAlgebra([(1, "co")])
    CC = SSAlgebra([(1, "co"), (1, "co")])
    diag_star = AlgebraHom.from_callable(
        C, CC, lambda x: (x[0], tuple(tuple(s.conj() for s in r) for r in x[0]))
    )
    path = tmp_path / "emb.json"
    path.write_text(json.dumps(jsonio.embedding_to_json(diag_star)))
    code, out, _ = run_cli(capsys, "decompose", str(path))
    assert code == 0
    parsed = json.loads(out)
    assert [c["kind"] for c in parsed["components"]] == [2]
    assert parsed["components"][0]["tau"] == "conj"
    # non-nodal: scalars inside M3
    R = SSAlgebra([(1, "re")])
    M3 = SSAlgebra([(3, "re")])
    zero = DivisionScalar.zero("re")
    scalars = AlgebraHom.from_callable(
        R, M3,
        lambda x: (
            tuple(
                tuple(x[0][0][0] if a == b else zero for b in range(3))
                for a in range(3)
            ),
        ),
    )
    path2 = tmp_path / "m3.json"
    path2.write_text(json.dumps(jsonio.embedding_to_json(scalars)))
    code, out, _ = run_cli(capsys, "decompose", str(path2))
    assert code == 1
