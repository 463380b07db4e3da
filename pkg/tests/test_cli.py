import io
import json
import xml.etree.ElementTree as ET

import jsonschema
import pytest

from symquad import cli
from symquad.errors import InvariantViolation

SCHEMA = cli.load_schema()


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = cli.run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def run_json(*argv):
    code, out, err = run(*argv, "--format", "json")
    doc = json.loads(out)
    jsonschema.validate(doc, SCHEMA)
    return code, doc


def test_schema_is_valid():
    jsonschema.Draft7Validator.check_schema(SCHEMA)


def test_equations_json():
    code, doc = run_json("equations", "--r", "2")
    assert code == 0
    assert doc["schema"] == "1"
    assert len(doc["result"]["equations"]) == 5


@pytest.mark.parametrize(
    "argv",
    [
        ["classify", "--r", "2", "--matrix", "1,0,0,0;0,0,0,0;0,0,0,0;0,0,0,0"],
        ["classify", "--r", "2", "--matrix", "[[1,0,0,0],[0,1,0,0],[0,0,1,0],[0,0,0,1]]"],
        ["normal-form", "--r", "2", "--matrix", "4,0,0,0;0,1,0,0;0,0,1/4,0;0,0,0,1"],
        ["tangent-cone", "--r", "3", "--k", "1"],
        ["tangent-cone", "--r", "2", "--k", "1", "--minors", "3"],
        ["secant", "--n", "3", "--h", "3", "--k", "1"],
        ["sample", "--r", "2", "--trials", "12", "--seed", "3"],
        ["verify-x4"],
        ["rulings"],
        ["chambers", "--space", "S6"],
        ["cones", "--space", "K(4)"],
        ["cones", "--r", "3"],
        ["fano", "--r", "7"],
        ["schubert", "--r", "3"],
        ["schubert", "--r", "3", "--product", "s1*s2*s3"],
        ["chern", "--r", "4"],
        ["moduli-dim", "--r", "2"],
        ["intersect", "--preset", "nine-lines"],
        ["intersect", "--a", "6", "--b", "2", "--n", "5", "--segre", "1,-9,51", "--m", "2"],
        ["reproduce", "--anchor", "chasles"],
    ],
)
def test_every_subcommand_validates(argv):
    code, doc = run_json(*argv)
    assert code == 0
    assert "result" in doc
    code_text, text, _ = run(*argv)
    assert code_text == 0 and text.strip()


def test_rationals_are_strings():
    _, doc = run_json("normal-form", "--r", "2", "--matrix", "4,0,0,0;0,1,0,0;0,0,1/4,0;0,0,0,1")
    assert doc["result"]["witness"][2][2] == "1/2"
    _, doc = run_json("fano", "--r", "2")
    assert doc["result"]["antiK"]["coords"] == ["5/2", "3"]


def test_values():
    assert run_json("fano", "--r", "7")[1]["result"]["type"] == "weak-Fano"
    assert run_json("intersect", "--preset", "chasles")[1]["result"]["value"] == 3264
    assert run_json("intersect", "--preset", "six-lines-symplectic")[1]["result"]["value"] == 40
    _, text, _ = run("reproduce", "--anchor", "nine-lines")
    assert text.startswith("PASS  nine-lines") and "92" in text


def test_usage_errors_exit_2():
    assert run("bogus")[0] == 2
    assert run()[0] == 2
    code, _, err = run("secant", "--n", "3")
    assert code == 2 and "--h" in err
    assert run("secant", "--n", "3", "--h", "9")[0] == 2
    assert run("classify", "--r", "2", "--matrix", "1,2;3")[0] == 2
    assert run("normal-form", "--r", "2", "--matrix", "1,0,0,0;0,1,0,0;0,0,1,0;0,0,0,0")[0] == 2
    assert run("equations", "--r", "2", "--format", "svg")[0] == 2
    assert run("reproduce", "--anchor", "nope")[0] == 2


def test_invariant_violation_exit_3(monkeypatch):
    def boom(r, trials, seed):
        raise InvariantViolation("forbidden rank 3", witness=[["1", "0"], ["0", "1"]])

    monkeypatch.setattr(cli.symplectic, "rank_gap_sampling", boom)
    code, out, err = run("sample", "--r", "2", "--format", "json")
    assert code == 3
    doc = json.loads(out)
    jsonschema.validate(doc, SCHEMA)
    assert doc["error"]["kind"] == "invariant-violation"
    assert doc["error"]["witness"] == [["1", "0"], ["0", "1"]]
    assert "forbidden rank" in err


def test_svg_output():
    for space in ("S4", "S6", "K(3)"):
        code, out, _ = run("chambers", "--space", space, "--format", "svg")
        assert code == 0
        root = ET.fromstring(out)
        assert root.tag.endswith("svg")
    _, out, _ = run("chambers", "--space", "S6", "--format", "svg")
    assert out.count("<polygon") == 9


def test_out_file(tmp_path):
    path = tmp_path / "res.json"
    code, text, _ = run("secant", "--n", "3", "--h", "2", "--out", str(path))
    assert code == 0 and "deg: 10" in text
    doc = json.loads(path.read_text())
    jsonschema.validate(doc, SCHEMA)
    assert doc["result"]["deg"] == 10


def test_determinism():
    a = run("sample", "--r", "3", "--trials", "30", "--seed", "9", "--format", "json")
    b = run("sample", "--r", "3", "--trials", "30", "--seed", "9", "--format", "json")
    assert a == b


def test_threads_keep_order(monkeypatch):
    monkeypatch.setenv("SYMQUAD_WORKERS", "4")
    a = run("reproduce", "--anchor", "chasles", "--anchor", "nine-lines", "--anchor", "fano", "--format", "json")
    monkeypatch.setenv("SYMQUAD_WORKERS", "1")
    b = run("reproduce", "--anchor", "chasles", "--anchor", "nine-lines", "--anchor", "fano", "--format", "json")
    assert a == b


def test_tangent_cone_minors_has_no_repeated_forms():
    code, doc = run_json("tangent-cone", "--r", "3", "--k", "1", "--minors", "2")
    assert code == 0
    forms = doc["result"]["forms"]
    assert len(forms) == len(set(forms))
    # rank <= 2 near a rank-1 point: quadric lowest parts, cone of degree 16
    assert doc["result"]["multiplicity"] == 2
    assert doc["result"]["secant_mult"] == 16
    assert doc["result"]["hypersurface"] is False


def test_tangent_cone_determinant_order_matches_secant_mult():
    code, doc = run_json("tangent-cone", "--r", "2", "--k", "1", "--minors", "3")
    assert code == 0
    assert doc["result"]["hypersurface"] is True
    assert doc["result"]["multiplicity"] == doc["result"]["secant_mult"] == 3
