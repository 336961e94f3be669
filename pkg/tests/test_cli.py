import csv
import io
import json
import subprocess
import sys

import jsonschema
import pytest

from qhball import cli
from qhball.lattice import BUDGET_ENV
from qhball.schemas import SCHEMAS, schema_for


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = cli.run([str(a) for a in argv], out, err)
    return code, out.getvalue(), err.getvalue()


def call_json(*argv):
    code, out, err = call(*argv, "--format", "json")
    doc = json.loads(out)
    jsonschema.validate(doc, schema_for(doc))
    return code, doc


def test_classify_examples():
    code, doc = call_json("classify", 2, 3, 4)
    assert code == cli.OK and doc["bounds"] and doc["family"]["id"] == 1
    assert doc["schema"] == "qhball.classify/1"
    code, doc = call_json("classify", 2, 3, 16)
    assert code == cli.NEGATIVE and doc["family"] is None


def test_embed_obstructed():
    code, out, _ = call("embed", 5, 7, 37)
    assert code == cli.NEGATIVE and "Obstructed" in out
    code, doc = call_json("embed", 5, 7, 37)
    assert doc["verdict"] == "Obstructed" and doc["embedding"] is None


def test_embed_found_and_gram():
    code, doc = call_json("embed", 3, 17, 49)
    assert code == cli.OK and doc["verdict"] == "Unobstructed"
    assert doc["embedding"]["profile"]["total"] == -1
    code, doc = call_json("embed", "--gram", "[[2,-1,0],[-1,2,-1],[0,-1,2]]")
    assert code == cli.OK and doc["verdict"] == "Found"
    code, doc = call_json("embed", "--gram", "[[2,-1],[-1,2]]")
    assert code == cli.NEGATIVE and doc["verdict"] == "None"


def test_embed_inconclusive(monkeypatch):
    monkeypatch.setenv(BUDGET_ENV, "10000")
    code, doc = call_json("embed", 37, 265, 9801)
    assert code == cli.INCONCLUSIVE and doc["verdict"] == "Inconclusive"


# one invocation per JSON document type
DOCS = [
    ("seq", "S", 2, "--count", 3),
    ("seq", "fib", 100, "--count", 2),
    ("cfrac", "expand", "16/9"),
    ("cfrac", "eval", "[2,5,2]"),
    ("cfrac", "dual", "2^3"),
    ("cfrac", "stats", "[2,5,2]"),
    ("plumbing", 2, 3, 4),
    ("plumbing", 5, 7, 37),
    ("embed", 3, 17, 49),
    ("floer", "vseq", 3, 5),
    ("floer", "cable", 2, 3, "--base", "2,3"),
    ("floer", "dtest", 2, 3, 4),
    ("floer", "dtest", 2, 3, 5),
    ("floer", "bounds", "--nu", 3, "--v0", 1),
    ("floer", "bounds", "--nu", 3, "--v0", 1, "--q1"),
    ("lens", "lens", 4, 1),
    ("lens", "lens", 7, 2),
    ("lens", "reducible", 4, 9),
    ("lens", "string", 3, 5, "+1"),
    ("classify", 4, 9, 36),
    ("classify", 2, 3, 5),
    ("xcheck", 3, 17, 49),
    ("xcheck", 2, 3, 7),
    ("families", "--id", 5),
    ("families", "--count", 2),
]


@pytest.mark.parametrize("argv", DOCS, ids=lambda a: " ".join(map(str, a)))
def test_json_documents_validate_and_are_deterministic(argv):
    _, first, _ = call(*argv, "--format", "json")
    _, second, _ = call(*argv, "--format", "json")
    assert first == second
    doc = json.loads(first)
    jsonschema.validate(doc, schema_for(doc))
    assert first.strip() == json.dumps(doc, sort_keys=True)


def _walk(x):
    if isinstance(x, dict):
        for v in x.values():
            yield from _walk(v)
    elif isinstance(x, list):
        for v in x:
            yield from _walk(v)
    else:
        yield x


@pytest.mark.parametrize("argv", DOCS, ids=lambda a: " ".join(map(str, a)))
def test_no_floats_in_json(argv):
    _, out, _ = call(*argv, "--format", "json")
    assert not any(isinstance(v, float) for v in _walk(json.loads(out)))


def test_big_integers_are_strings():
    _, doc = call_json("seq", "fib", 100)
    assert doc["values"] == [str(354224848179261915075)]
    _, doc = call_json("seq", "fib", 10)
    assert doc["values"] == [55]


def test_schemas_are_valid_and_versioned():
    for name, schema in SCHEMAS.items():
        jsonschema.Draft202012Validator.check_schema(schema)
    with pytest.raises(KeyError):
        schema_for({"schema": "qhball.seq/2"})


def test_schema_rejects_tampered_document():
    _, doc = call_json("classify", 2, 3, 4)
    doc["bounds"] = "yes"
    with pytest.raises(jsonschema.ValidationError):
        jsonschema.validate(doc, schema_for(doc))


def test_human_output_marks_approximations():
    _, out, _ = call("cfrac", "eval", "[2,5,2]")
    assert "16/9" in out and "≈" in out


def test_scan_csv():
    code, out, _ = call("scan", "--pmax", 6, "--squares", "--csv")
    assert code == cli.OK
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["p", "q", "n", "bounds", "family", "dtest", "lattice", "consistent"]
    assert ["3", "5", "16", "true", "(14) r=1", "pass", "excluded", "true"] in rows
    assert all(len(r) == 8 for r in rows)


def test_scan_jsonl_and_jobs():
    _, serial, _ = call("scan", "--pmax", 7, "--squares", "--jsonl")
    _, parallel, _ = call("scan", "--pmax", 7, "--squares", "--jsonl", "--jobs", 2)
    assert serial == parallel
    lines = [json.loads(x) for x in serial.splitlines()]
    for doc in lines:
        jsonschema.validate(doc, schema_for(doc))
    assert lines[-1]["schema"] == "qhball.scan.summary/1"
    assert lines[-1]["rows"] == len(lines) - 1 and lines[-1]["anomalies"] == []


def test_scan_summary_json():
    code, doc = call_json("scan", "--pmax", 5, "--squares")
    assert code == cli.OK and doc["bounding"] >= 1 and doc["inconsistent"] == []


def test_scan_with_lattice():
    code, out, _ = call("scan", "--pmax", 5, "--squares", "--csv", "--lattice")
    rows = list(csv.reader(io.StringIO(out)))[1:]
    assert code == cli.OK
    statuses = {r[6] for r in rows if "above cap" not in r[6]}
    assert statuses == {"Obstructed", "Unobstructed", "excluded"}


@pytest.mark.parametrize("argv", [
    (),
    ("nosuch",),
    ("classify", 3, 6, 9),
    ("classify", 1, 3, 4),
    ("classify", 2, 3),
    ("classify", 2, 3, 0),
    ("plumbing", 2, 3, 6),
    ("embed", 5, 7, 37, "--lattice-budget", 5),
    ("embed",),
    ("embed", "--gram", "[[1,2"),
    ("embed", "--gram", "[[1,2],[2,1]]"),
    ("cfrac", "eval", "[1,2]"),
    ("cfrac", "expand", "1/2"),
    ("lens", "string", 2, 3, "0"),
    ("floer", "cable", 2, 3, "--base", "2"),
    ("scan", "--pmax", 2),
    ("scan", "--pmax", 5, "--jobs", 0),
    ("scan", "--pmax", 5, "--csv", "--jsonl"),
    ("families", "--id", 19),
    ("seq", "X", 1),
    ("classify", 2, 3, 4, "--format", "xml"),
])
def test_usage_errors(argv):
    code, out, err = call(*argv)
    assert code == cli.USAGE
    assert out == "" and "error" in err


def test_budget_env_var(monkeypatch):
    monkeypatch.setenv(BUDGET_ENV, "5")
    code, _, err = call("embed", 5, 7, 37)
    assert code == cli.USAGE and BUDGET_ENV in err
    monkeypatch.setenv(BUDGET_ENV, "100000")
    assert call("embed", 5, 7, 37)[0] == cli.NEGATIVE


def test_xcheck_exit_codes():
    assert call("xcheck", 3, 17, 49)[0] == cli.OK
    code, doc = call_json("xcheck", 7, 52, 361)
    assert code == cli.OK and not doc["dtest"]["passed"]
    assert doc["lattice_status"] == "Obstructed" and doc["consistent"]


def test_lens_exit_codes():
    assert call("lens", "lens", 4, 1)[0] == cli.OK
    assert call("lens", "lens", 5, 1)[0] == cli.NEGATIVE
    assert call("lens", "reducible", 2, 3)[0] == cli.NEGATIVE


def test_dot_output():
    code, out, _ = call("plumbing", 2, 3, 4, "--dot")
    assert code == cli.OK and out.startswith("graph plumbing {")


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "qhball", "classify", "2", "3", "4", "--format", "json"],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0
    assert json.loads(res.stdout)["family"]["id"] == 1
    res = subprocess.run([sys.executable, "-m", "qhball", "classify", "2", "3"],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 2 and "usage" in res.stderr
