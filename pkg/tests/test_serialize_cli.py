import json
from fractions import Fraction as F

import pytest

from conftest import poly
from cybethe import cli, serialize
from cybethe.frame import BetheTuple
from cybethe.qpoly import QPoly
from cybethe.scalars import Cyc


A2_INSTANCE = {
    "cartan": {"series": "A", "rank": 2},
    "sigma": "(1 2)",
    "M": 2,
    "omega": "-1",
    "points": [],
    "site_weights": [],
    "lambda0": ["1/2", "1/2"],
}

A2_TUPLE = {"polys": [
    {"denom": 1, "terms": {"0": "-1", "3": "1"}},
    {"denom": 1, "terms": {"0": "1", "3": "1"}},
]}


@pytest.fixture
def docs(tmp_path):
    inst = tmp_path / "instance.json"
    tup = tmp_path / "tuple.json"
    inst.write_text(json.dumps(A2_INSTANCE))
    tup.write_text(json.dumps(A2_TUPLE))
    return str(inst), str(tup), tmp_path


def test_scalar_round_trip():
    w = Cyc.root_of_unity(8)
    values = [Cyc.of(F(-7, 3)), w ** 2 * F(3, 2) - 1, w ** 3 + w, Cyc.of(0)]
    for v in values:
        s = serialize.scalar_str(v)
        back = serialize.parse_scalar(s, 8)
        assert back == v, (s, back)


def test_qpoly_round_trip():
    p = QPoly({F(1, 2): Cyc.root_of_unity(4), F(3): Cyc.of(F(-2, 5))})
    doc = serialize.qpoly_doc(p)
    assert doc["denom"] == 2
    back = serialize.qpoly_from_doc(doc, 4)
    assert back == p


def test_tuple_round_trip_byte_stable():
    y = BetheTuple([poly(-1, 0, 0, 1), poly(1, 0, 0, 1)])
    blob = serialize.tuple_doc_json(y)
    reparsed = serialize.tuple_from_doc(json.loads(blob))
    assert serialize.tuple_doc_json(reparsed) == blob


def test_instance_round_trip():
    inst = serialize.instance_from_doc(A2_INSTANCE)
    doc = serialize.instance_doc(inst)
    again = serialize.instance_from_doc(doc)
    assert again.lambda0 == inst.lambda0
    assert again.omega == inst.omega
    assert serialize.dumps(serialize.instance_doc(again)) == \
        serialize.dumps(doc)


def test_perm_parsing():
    aut = serialize.perm_from_doc("(1 4)(2 3)", 4)
    assert aut.perm == (3, 2, 1, 0)
    aut2 = serialize.perm_from_doc([4, 3, 2, 1], 4)
    assert aut2.perm == (3, 2, 1, 0)
    aut3 = serialize.perm_from_doc("(1 3)", 3)
    assert aut3.perm == (2, 1, 0)


def test_cli_fold(capsys):
    rc = cli.main(["fold", "--cartan", "A4", "--sigma", "(1 4)(2 3)"])
    assert rc == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["linking"] == [1, 2, 2, 1]
    assert doc["a_fold"] == [[2, -1], [-2, 2]]


def test_cli_verify_green(docs, capsys):
    inst, tup, _ = docs
    rc = cli.main(["verify", "--instance", inst, "--tuple", tup])
    assert rc == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["critical"] and doc["cyclotomic"] and doc["generic"]
    assert doc["lambda_infinity"] == ["-5/2", "-5/2"]


def test_cli_verify_red(docs, tmp_path, capsys):
    inst, _, _ = docs
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"polys": [
        {"denom": 1, "terms": {"0": "-1", "1": "1"}},
        {"denom": 1, "terms": {"0": "1", "1": "1"}},
    ]}))
    rc = cli.main(["verify", "--instance", inst, "--tuple", str(bad)])
    assert rc == 1


def test_cli_generate_and_populate_round_trip(docs, capsys):
    inst, tup, tmp = docs
    out = tmp / "gen.json"
    rc = cli.main(["generate", "--instance", inst, "--tuple", tup,
                   "--direction", "1", "--c", "1", "--out", str(out)])
    assert rc == 0
    doc = json.loads(out.read_text())
    emitted = serialize.tuple_from_doc(doc["tuple"])
    rc = cli.main(["populate", "--instance", inst, "--tuple", tup,
                   "--depth", "0", "--out", str(tmp / "pop.json")])
    assert rc == 0
    cat = json.loads((tmp / "pop.json").read_text())
    assert len(cat["nodes"]) == 1
    node_tuple = serialize.tuple_from_doc(cat["nodes"][0]["tuple"])
    # round trip: catalog re-serializes identically
    assert serialize.tuple_doc_json(node_tuple) == \
        serialize.dumps(cat["nodes"][0]["tuple"])


def test_cli_populate_depth1_deterministic(docs):
    inst, tup, tmp = docs
    seedfile = tmp / "trivial.json"
    seedfile.write_text(json.dumps({"polys": [
        {"denom": 1, "terms": {"0": "1"}},
        {"denom": 1, "terms": {"0": "1"}}]}))
    out1, out2 = tmp / "p1.json", tmp / "p2.json"
    for out in (out1, out2):
        rc = cli.main(["populate", "--instance", inst, "--tuple",
                       str(seedfile), "--depth", "1",
                       "--samples", "1/3,1", "--out", str(out)])
        assert rc == 0
    assert out1.read_text() == out2.read_text()
    cat = json.loads(out1.read_text())
    assert len(cat["nodes"]) == 3


def test_cli_typea_analyze(docs):
    inst, tup, tmp = docs
    out = tmp / "an.json"
    rc = cli.main(["typea", "analyze", "--instance", inst, "--tuple", tup,
                   "--out", str(out)])
    assert rc == 0
    doc = json.loads(out.read_text())
    assert doc["self_dual"] is True
    assert doc["frame_report"]["ok"] is True
    assert doc["exponents"] == ["0", "3/2", "3"]
    assert doc["p"] == 1
    assert doc["flag_isotropic"] is True


def test_cli_typea_flow(docs, capsys):
    inst, tup, _ = docs
    rc = cli.main(["typea", "flow", "--instance", inst, "--tuple", tup,
                   "--k", "1", "--c", "1,2,1/2,-1,3"])
    assert rc == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["all_match"] is True
    assert doc["rho"] == "27/2"


def test_cli_eigenvalues(docs, capsys):
    inst, tup, _ = docs
    rc = cli.main(["eigenvalues", "--instance", inst, "--tuple", tup])
    assert rc == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["origin_zero"] is True and doc["match"] is True


def test_cli_lambda0(capsys):
    rc = cli.main(["lambda0", "--rank", "3"])
    assert rc == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["lambda0"] == ["0", "1", "0"]


def test_cli_check_numeric(docs, capsys):
    inst, tup, _ = docs
    rc = cli.main(["check-numeric", "--instance", inst, "--tuple", tup])
    assert rc == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["max_residual"] < 1e-8
    assert doc["gradient_mismatch"] < 1e-6


def test_cli_validate(docs, capsys):
    inst, _, _ = docs
    rc = cli.main(["validate", "--instance", inst, "--p", "1"])
    assert rc == 0


def test_cli_input_error(docs, capsys):
    _, tup, _ = docs
    rc = cli.main(["verify", "--instance", "/does/not/exist.json",
                   "--tuple", tup])
    assert rc == 2
    doc = json.loads(capsys.readouterr().out)
    assert doc["error"]["kind"] == "InputError"
