"""JSON Schemas (draft 2020-12) for the ``--format json`` documents.

Each document carries ``"schema": "qhball.<name>/<version>"``; this module
maps those names to schema dicts.  Bumping SCHEMA_VERSION in the CLI means
adding a new entry here, never editing an old one.
"""
from __future__ import annotations

VERSION = 1

_INT = {"type": "integer"}
_BOOL = {"type": "boolean"}
# integers of magnitude >= 2^53 travel as decimal strings
_BIG = {"oneOf": [{"type": "integer"}, {"type": "string", "pattern": r"^-?[0-9]+$"}]}
_RAT = {"type": "string", "pattern": r"^-?[0-9]+/[1-9][0-9]*$"}
_INTS = {"type": "array", "items": _INT}
_WEIGHTS = {"type": "array", "items": {"type": "integer", "minimum": 2}}
_NULLABLE_INT = {"type": ["integer", "null"]}


def _obj(props, required=None):
    return {"type": "object", "properties": props,
            "required": sorted(required if required is not None else props),
            "additionalProperties": False}


def _doc(name, props, required=None):
    props = dict(props, schema={"const": f"qhball.{name}/{VERSION}"})
    if required is not None:
        required = list(required) + ["schema"]
    return _obj(props, required)


def _ops(name, variants):
    return {"$schema": "https://json-schema.org/draft/2020-12/schema",
            "oneOf": [_doc(name, dict(props, op={"const": op})) for op, props in variants.items()]}


_FAMILY = {"oneOf": [{"type": "null"}, _obj({
    "id": {"type": "integer", "minimum": 1, "maximum": 18},
    "param": _NULLABLE_INT,
    "sign": {"enum": [None, -1, 1]},
    "sporadic_index": _NULLABLE_INT,
    "label": {"type": "string"},
    "set": {"enum": ["G", "R", "L"]},
})]}

_LISCA = {"oneOf": [{"type": "null"}, _obj({
    "family": {"enum": ["A", "B1", "B2", "B3", "C1", "C2", "C3", "D1", "D2", "D3", "E"]},
    "s": _NULLABLE_INT,
    "t": _NULLABLE_INT,
    "b": {"oneOf": [{"type": "null"}, _WEIGHTS]},
    "reversed": _BOOL,
    "label": {"type": "string"},
    "string": _WEIGHTS,
})]}

_DTEST = {
    "n": _INT,
    "m": _NULLABLE_INT,
    "passed": _BOOL,
    "labels": _INTS,
    "failures": {"type": "array", "items": _obj({"k": _INT, "expected": _INT, "actual": _INT})},
    "label_failures": _INTS,
    "routes_agree": _BOOL,
}

_EMBEDDING = {"oneOf": [{"type": "null"}, _obj({
    "coords": {"type": "array", "items": _INTS},
    "profile": _obj({"hit_counts": _INTS, "contributions": _INTS, "total": _INT}),
})]}

_LATTICE_VERDICT = {"enum": ["Obstructed", "Unobstructed", "Inconclusive"]}

_REPORT = {
    "p": _INT, "q": _INT, "n": _BIG,
    "bounds": _BOOL,
    "family": _FAMILY,
    "all_families": {"type": "array", "items": _FAMILY},
    "obstruction_note": {"type": ["string", "null"]},
    "dtest": _obj(_DTEST),
    "lattice": {"oneOf": [{"type": "null"}, _obj({
        "status": _LATTICE_VERDICT, "rank": _INT, "nodes_explored": _INT,
        "embedding": _EMBEDDING})]},
    "lattice_status": {"type": "string"},
    "inconsistencies": {"type": "array", "items": {"type": "string"}},
    "consistent": _BOOL,
    "anomaly": _BOOL,
}

_SUMMARY = {
    "pmax": _INT, "squares_only": _BOOL, "rows": _INT, "bounding": _INT,
    "inconsistent": {"type": "array", "items": _INTS},
    "anomalies": {"type": "array", "items": _INTS},
}

SCHEMAS = {
    "seq": _doc("seq", {"kind": {"enum": ["fib", "R", "S", "T"]}, "start": _INT,
                        "values": {"type": "array", "items": _BIG}}),
    "cfrac": _ops("cfrac", {
        "expand": {"value": _RAT, "string": _WEIGHTS},
        "eval": {"string": _WEIGHTS, "value": _RAT},
        "dual": {"string": _WEIGHTS, "dual": _WEIGHTS, "value": _RAT, "dual_value": _RAT},
        "stats": {"string": _WEIGHTS, "I": _INT, "J": _INT},
    }),
    "plumbing": _doc("plumbing", {
        "p": _INT, "q": _INT, "n": _INT,
        "kind": {"enum": ["GAMMA1", "GAMMA2"]},
        "k": _INT, "r": _INT, "N": _INT,
        "a": _WEIGHTS, "b": _WEIGHTS,
        "legs": {"type": "array", "items": _WEIGHTS, "minItems": 3, "maxItems": 3},
        "weights": _WEIGHTS,
        "edges": {"type": "array", "items": {"type": "array", "items": _INT,
                                             "minItems": 2, "maxItems": 2}},
        "rank": _INT,
        "reversed_boundary": _BOOL,
        "gram": {"type": "array", "items": _INTS},
        "determinant": _BIG,
        "I": _INT,
        "dot": {"type": "string"},
        "seifert": _obj({"e0": _INT, "fractions": {"type": "array", "items": _RAT}}),
    }),
    "embed": {"$schema": "https://json-schema.org/draft/2020-12/schema", "oneOf": [
        _doc("embed", {"input": {"const": "gram"}, "rank": _INT,
                       "verdict": {"enum": ["Found", "None", "Inconclusive"]},
                       "nodes_explored": _INT, "embedding": _EMBEDDING}),
        _doc("embed", {"input": {"const": "triple"}, "p": _INT, "q": _INT, "n": _INT,
                       "rank": _INT, "verdict": _LATTICE_VERDICT,
                       "nodes_explored": _INT, "embedding": _EMBEDDING}),
    ]},
    "floer": _ops("floer", {
        "vseq": {"p": _INT, "q": _INT, "V": _INTS, "nu_plus": _INT},
        "cable": {"base": _INTS, "p": _INT, "q": _INT, "V": _INTS, "nu_plus": _INT},
        "dtest": dict(_DTEST, p=_INT, q=_INT),
        "bounds": {"nu": _INT, "v0": _INT, "q_equals_one": _BOOL,
                   "lower": {"oneOf": [{"type": "null"}, _RAT]},
                   "lower_radicand": _NULLABLE_INT,
                   "upper": {"oneOf": [{"type": "null"}, _RAT]}},
    }),
    "lens": _ops("lens", {
        "lens": {"p": _INT, "q": _INT, "bounds": _BOOL, "string": _WEIGHTS, "tag": _LISCA},
        "reducible": {"p": _INT, "q": _INT, "bounds": _BOOL, "long": _WEIGHTS,
                      "short": _WEIGHTS, "long_tag": _LISCA, "short_tag": _LISCA},
        "string": {"p": _INT, "q": _INT, "sign": {"enum": [-1, 1]}, "string": _WEIGHTS,
                   "value": _RAT, "bounds": _BOOL, "tag": _LISCA},
    }),
    "classify": _doc("classify", {
        "p": _INT, "q": _INT, "n": _BIG, "bounds": _BOOL, "family": _FAMILY,
        "all_families": {"type": "array", "items": _FAMILY},
        "obstruction_note": {"type": ["string", "null"]},
    }),
    "xcheck": _doc("xcheck", _REPORT),
    "scan.row": _doc("scan.row", _REPORT),
    "scan.summary": _doc("scan.summary", _SUMMARY),
    "families": _doc("families", {"families": {"type": "array", "items": _obj({
        "id": _INT, "set": {"enum": ["G", "R", "L"]}, "sporadic": _BOOL,
        "members": {"type": "array", "items": _obj({
            "tag": _FAMILY, "p": _BIG, "q": _BIG, "n": _BIG})},
    })}}),
}


def schema_for(document: dict) -> dict:
    """The schema a document claims via its ``schema`` field."""
    name, _, version = document["schema"].partition("/")
    if not name.startswith("qhball.") or version != str(VERSION):
        raise KeyError(document["schema"])
    return SCHEMAS[name[len("qhball."):]]
