"""Command-line front end.

Every subcommand prints either a short human summary or (``--format json``)
one JSON document with sorted keys and a versioned ``schema`` field.
Rationals are written as "num/den" strings and integers too large for a
double as decimal strings, so machine output never contains floats.

Exit codes: 0 success or positive verdict, 1 valid but negative verdict,
2 usage error, 3 inconclusive lattice search.
"""
from __future__ import annotations

import argparse
import csv
import enum
import json
import sys
from fractions import Fraction

from . import cfrac, classify as cl, floer, lattice, lisca, plumbing, seq
from .plumbing import SurgeryTriple

SCHEMA_VERSION = 1
OK, NEGATIVE, USAGE, INCONCLUSIVE = 0, 1, 2, 3
MIN_BUDGET = 10 ** 4
SCAN_COLUMNS = ("p", "q", "n", "bounds", "family", "dtest", "lattice", "consistent")
_SAFE_INT = 2 ** 53


class UsageError(Exception):
    pass


def schema_name(command: str) -> str:
    return f"qhball.{command}/{SCHEMA_VERSION}"


def to_jsonable(x):
    """Exact, float-free JSON form of library values."""
    if isinstance(x, bool) or x is None or isinstance(x, str):
        return x
    if isinstance(x, int):
        return x if abs(x) < _SAFE_INT else str(x)
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    if isinstance(x, enum.Enum):
        return x.value
    if isinstance(x, dict):
        return {str(k): to_jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [to_jsonable(v) for v in x]
    raise TypeError(f"cannot serialise {type(x).__name__}")


def dumps(command: str, payload: dict) -> str:
    doc = dict(payload)
    doc["schema"] = schema_name(command)
    return json.dumps(to_jsonable(doc), sort_keys=True)


def _approx(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator} (≈ {float(x):.6g})"


# argument helpers

def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}")


def _string(text: str) -> cfrac.WeightString:
    try:
        return cfrac.parse_string(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _budget(text: str) -> int:
    try:
        b = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"budget must be an integer: {text!r}")
    if b < MIN_BUDGET:
        raise argparse.ArgumentTypeError(f"budget must be at least {MIN_BUDGET}")
    return b


def _pair(text: str) -> tuple[int, int]:
    try:
        a, b = (int(s) for s in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected p0,q0 but got {text!r}")
    return a, b


def _sign(text: str) -> int:
    if text in ("+1", "1", "+"):
        return 1
    if text in ("-1", "-"):
        return -1
    raise argparse.ArgumentTypeError("sign must be +1 or -1")


def resolve_budget(value: int | None) -> int:
    if value is not None:
        return value
    b = lattice.default_budget()
    if b < MIN_BUDGET:
        raise UsageError(f"{lattice.BUDGET_ENV} must be at least {MIN_BUDGET}")
    return b


def _triple(args) -> SurgeryTriple:
    try:
        return SurgeryTriple(args.p, args.q, args.n)
    except ValueError as exc:
        raise UsageError(str(exc))


# payload builders, shared by the human and JSON views

def family_dict(tag: cl.FamilyTag | None):
    if tag is None:
        return None
    d = tag.as_dict()
    d["set"] = tag.family_set
    return d


def lisca_dict(tag: lisca.LiscaTag | None):
    if tag is None:
        return None
    return {"family": tag.family, "s": tag.s, "t": tag.t,
            "b": None if tag.b is None else list(tag.b),
            "reversed": tag.reversed, "label": tag.label(), "string": list(tag.string())}


def dtest_dict(v: floer.DInvVerdict) -> dict:
    return {"n": v.n, "m": v.m, "passed": v.passed, "labels": list(v.labels),
            "failures": [{"k": k, "expected": e, "actual": a} for k, e, a in v.failures],
            "label_failures": list(v.label_failures), "routes_agree": v.routes_agree}


def embedding_dict(e: lattice.Embedding | None):
    if e is None:
        return None
    prof = lattice.embedding_profile(e)
    return {"coords": [list(r) for r in e.coords],
            "profile": {"hit_counts": list(prof.hit_counts),
                        "contributions": list(prof.contributions), "total": prof.total}}


def report_dict(rep: cl.Report) -> dict:
    t, v = rep.triple, rep.verdict
    lat = rep.lattice
    return {
        "p": t.p, "q": t.q, "n": t.n,
        "bounds": v.bounds,
        "family": family_dict(v.witness),
        "all_families": [family_dict(w) for w in v.all_witnesses],
        "obstruction_note": v.obstruction_note,
        "dtest": dtest_dict(rep.dtest),
        "lattice": None if lat is None else {
            "status": lat.status, "rank": lat.rank, "nodes_explored": lat.nodes_explored,
            "embedding": embedding_dict(lat.embedding)},
        "lattice_status": rep.lattice_status(),
        "inconsistencies": list(rep.inconsistencies),
        "consistent": rep.consistent,
        "anomaly": rep.anomaly,
    }


def dtest_word(v: floer.DInvVerdict) -> str:
    if v.m is None:
        return "n/a"
    return "pass" if v.passed else "fail"


def scan_row(rep: cl.Report) -> list:
    t, v = rep.triple, rep.verdict
    fam = "" if v.witness is None else v.witness.label()
    return [t.p, t.q, t.n, str(v.bounds).lower(), fam, dtest_word(rep.dtest),
            rep.lattice_status(), str(rep.consistent).lower()]


# subcommands; each returns (exit code, command name, payload, human text)

def cmd_seq(args):
    kind = args.kind
    if kind == "fib":
        values = [seq.fibonacci(i) for i in range(args.index, args.index + args.count)]
    else:
        values = [seq.pell(kind, i) for i in range(args.index, args.index + args.count)]
    payload = {"kind": kind, "start": args.index, "values": values}
    human = "\n".join(f"{kind}[{args.index + i}] = {v}" for i, v in enumerate(values))
    return OK, "seq", payload, human


def cmd_cfrac(args):
    op = args.op
    if op == "expand":
        ws = cfrac.expand(args.value)
        payload = {"op": op, "value": args.value, "string": list(ws)}
        human = f"{_approx(args.value)} = {list(ws)}"
    elif op == "eval":
        v = cfrac.evaluate(args.string)
        payload = {"op": op, "string": list(args.string), "value": v}
        human = f"{list(args.string)} = {_approx(v)}"
    elif op == "dual":
        d = cfrac.dual(args.string)
        payload = {"op": op, "string": list(args.string), "dual": list(d),
                   "value": cfrac.evaluate(args.string), "dual_value": cfrac.evaluate(d)}
        human = f"dual of {list(args.string)} is {list(d)}"
    else:
        st = cfrac.stats(args.string)
        payload = {"op": op, "string": list(args.string), "I": st.i_value, "J": st.j_value}
        human = f"I = {st.i_value}, J = {st.j_value}"
    return OK, "cfrac", payload, human


def cmd_plumbing(args):
    t = _triple(args)
    if t.excluded:
        raise UsageError(f"n = {t.n} is within 1 of pq = {t.p * t.q}; no plumbing tree")
    tree = plumbing.surgery_plumbing(t)
    g = plumbing.gram(tree)
    det = plumbing.determinant(g)
    sd = plumbing.seifert_invariants(t)
    payload = {
        "p": t.p, "q": t.q, "n": t.n, "kind": tree.kind.name, "k": tree.k, "r": tree.r,
        "N": tree.N, "a": list(tree.a_leg), "b": list(tree.b_leg),
        "legs": [list(leg) for leg in tree.legs], "weights": list(tree.weights),
        "edges": [list(e) for e in tree.edges], "rank": tree.rank,
        "reversed_boundary": tree.reversed_boundary, "gram": [list(r) for r in g.rows()],
        "determinant": det, "I": tree.i_value(), "dot": tree.to_dot(),
        "seifert": {"e0": sd.e0, "fractions": list(sd.fractions)},
    }
    if args.dot:
        human = tree.to_dot()
    else:
        human = "\n".join([
            f"{tree.kind.name} for ({t.p},{t.q};{t.n}): k={tree.k} r={tree.r} N={tree.N}",
            f"legs {[list(leg) for leg in tree.legs]}, rank {tree.rank}",
            f"det = {det}, I = {tree.i_value()}",
            f"Seifert: Y({sd.e0}; " + ", ".join(f"{f.numerator}/{f.denominator}" for f in sd.fractions) + ")",
        ])
    return OK, "plumbing", payload, human


def cmd_embed(args):
    budget = resolve_budget(args.lattice_budget)
    if args.gram is not None:
        try:
            rows = json.loads(args.gram)
            g = plumbing.GramMatrix.from_rows(rows)
        except (ValueError, TypeError) as exc:
            raise UsageError(f"bad Gram matrix: {exc}")
        if not plumbing.is_positive_definite(g):
            raise UsageError("Gram matrix must be positive definite")
        res = lattice.find_embedding(g, budget)
        status = {lattice.Status.FOUND: "Found", lattice.Status.NONE: "None",
                  lattice.Status.INCONCLUSIVE: "Inconclusive"}[res.status]
        payload = {"input": "gram", "rank": g.order, "verdict": status,
                   "nodes_explored": res.nodes_explored, "embedding": embedding_dict(res.embedding)}
        code = {"Found": OK, "None": NEGATIVE, "Inconclusive": INCONCLUSIVE}[status]
    else:
        if args.p is None or args.q is None or args.n is None:
            raise UsageError("embed needs p q n or --gram")
        t = _triple(args)
        if t.excluded:
            raise UsageError(f"n = {t.n} is within 1 of pq = {t.p * t.q}; no plumbing tree")
        dv = lattice.donaldson_verdict(t, budget)
        status = dv.status.value
        payload = {"input": "triple", "p": t.p, "q": t.q, "n": t.n, "rank": dv.rank,
                   "verdict": status, "nodes_explored": dv.nodes_explored,
                   "embedding": embedding_dict(dv.embedding)}
        code = {lattice.Donaldson.UNOBSTRUCTED: OK, lattice.Donaldson.OBSTRUCTED: NEGATIVE,
                lattice.Donaldson.INCONCLUSIVE: INCONCLUSIVE}[dv.status]
    lines = [f"{status} (rank {payload['rank']}, {payload['nodes_explored']} nodes)"]
    if payload["embedding"] is not None:
        lines += [" ".join(f"{a:3d}" for a in row) for row in payload["embedding"]["coords"]]
    return code, "embed", payload, "\n".join(lines)


def cmd_floer(args):
    op = args.op
    code = OK
    if op == "vseq":
        v = floer.torus_v(args.p, args.q)
        payload = {"op": op, "p": args.p, "q": args.q, "V": list(v.values), "nu_plus": v.nu_plus}
        human = f"V = {list(v.values)} (nu+ = {v.nu_plus})"
    elif op == "cable":
        p0, q0 = args.base
        base = floer.torus_v(p0, q0)
        v = floer.cable_v(base, args.p, args.q)
        payload = {"op": op, "base": [p0, q0], "p": args.p, "q": args.q,
                   "V": list(v.values), "nu_plus": v.nu_plus}
        human = f"V = {list(v.values)} (nu+ = {v.nu_plus})"
    elif op == "dtest":
        t = _triple(args)
        verdict = floer.square_surgery_test(floer.torus_v(t.p, t.q), t.n)
        payload = {"op": op, "p": t.p, "q": t.q, **dtest_dict(verdict)}
        code = OK if verdict.passed else NEGATIVE
        if verdict.m is None:
            human = f"n = {t.n} is not a square"
        elif verdict.passed:
            human = f"pass: the {verdict.m} distinguished correction terms vanish"
        else:
            human = "fail: " + ", ".join(f"k={k}: V={a}, need {e}" for k, e, a in verdict.failures)
    else:
        try:
            b = floer.slope_bounds(args.nu, args.v0, args.q1)
        except ValueError as exc:
            raise UsageError(str(exc))
        payload = {"op": op, "nu": args.nu, "v0": args.v0, "q_equals_one": args.q1,
                   "lower": b.lower, "lower_radicand": b.radicand, "upper": b.upper}
        lower = (f"1/(2+sqrt({b.radicand})) ≈ {b.lower_value():.6g}" if b.radicand is not None
                 else _approx(b.lower))
        upper = "none" if b.upper is None else _approx(b.upper)
        human = f"lower {lower}, upper {upper}"
    return code, "floer", payload, human


def cmd_lens(args):
    op = args.op
    if op == "lens":
        try:
            ls = lisca.LensSpace(args.p, args.q)
        except ValueError as exc:
            raise UsageError(str(exc))
        tag = lisca.lens_bounds(ls)
        payload = {"op": op, "p": ls.p, "q": ls.q, "bounds": tag is not None,
                   "string": list(cfrac.expand(Fraction(ls.p, ls.q))), "tag": lisca_dict(tag)}
        human = f"L({ls.p},{ls.q}): " + (f"bounds, {tag.label()}" if tag else "does not bound")
        bounds = tag is not None
    elif op == "reducible":
        try:
            bounds = lisca.reducible_bounds(args.p, args.q)
        except ValueError as exc:
            raise UsageError(str(exc))
        long, short = lisca.reducible_strings(args.p, args.q)
        payload = {"op": op, "p": args.p, "q": args.q, "bounds": bounds,
                   "long": list(long), "short": list(short),
                   "long_tag": lisca_dict(lisca.recognize_string(long)),
                   "short_tag": lisca_dict(lisca.recognize_string(short))}
        human = f"L({args.p},-{args.q}) # L({args.q},-{args.p}): " + ("bounds" if bounds else "does not bound")
    else:
        try:
            ws = lisca.lens_surgery_string(args.p, args.q, args.sign)
        except ValueError as exc:
            raise UsageError(str(exc))
        tag = lisca.lens_surgery_bounds(args.p, args.q, args.sign)
        bounds = tag is not None
        payload = {"op": op, "p": args.p, "q": args.q, "sign": args.sign, "string": list(ws),
                   "value": cfrac.evaluate(ws), "bounds": bounds, "tag": lisca_dict(tag)}
        human = f"{list(ws)}: " + (f"bounds, {tag.label()}" if tag else "does not bound")
    return (OK if bounds else NEGATIVE), "lens", payload, human


def cmd_classify(args):
    t = _triple(args)
    v = cl.classify(t)
    payload = {"p": t.p, "q": t.q, "n": t.n, "bounds": v.bounds, "family": family_dict(v.witness),
               "all_families": [family_dict(w) for w in v.all_witnesses],
               "obstruction_note": v.obstruction_note}
    if v.bounds:
        human = "bounds: " + ", ".join(w.label() for w in v.all_witnesses)
    else:
        human = "does not bound" + (f" ({v.obstruction_note})" if v.obstruction_note else "")
    return (OK if v.bounds else NEGATIVE), "classify", payload, human


def cmd_xcheck(args):
    t = _triple(args)
    rep = cl.cross_check(t, resolve_budget(args.lattice_budget), args.rank_cap)
    payload = report_dict(rep)
    human = "\n".join([
        f"({t.p},{t.q};{t.n}): " + ("bounds " + rep.verdict.witness.label() if rep.verdict.bounds else "no family"),
        f"correction terms: {dtest_word(rep.dtest)}",
        f"lattice: {rep.lattice_status()}",
        "consistent" if rep.consistent else "INCONSISTENT: " + "; ".join(rep.inconsistencies),
    ] + (["anomaly: passes the correction-term test without a family"] if rep.anomaly else []))
    if not rep.consistent:
        code = NEGATIVE
    elif rep.lattice is not None and rep.lattice.status is lattice.Donaldson.INCONCLUSIVE:
        code = INCONCLUSIVE
    else:
        code = OK
    return code, "xcheck", payload, human


def cmd_families(args):
    ids = [args.id] if args.id is not None else list(range(1, 19))
    out = []
    for i in ids:
        members = []
        for tag in cl.family_tags(i):
            if len(members) >= args.count:
                break
            t = tag.triple()
            members.append({"tag": family_dict(tag), "p": t.p, "q": t.q, "n": t.n})
        out.append({"id": i, "set": cl.SET_OF[i], "sporadic": i in cl.SPORADIC, "members": members})
    payload = {"families": out}
    human = "\n".join(
        f"({f['id']}) " + " ".join(f"({m['p']},{m['q']};{m['n']})" for m in f["members"]) for f in out)
    return OK, "families", payload, human


def run_scan(args, out) -> int:
    budget = resolve_budget(args.lattice_budget) if args.lattice else None
    summary = cl.ScanSummary()
    reports = cl.scan(args.pmax, args.squares, budget, args.rank_cap, args.lattice, args.jobs)
    writer = csv.writer(out, lineterminator="\n") if args.csv else None
    if writer:
        writer.writerow(SCAN_COLUMNS)
    for rep in reports:
        summary.add(rep)
        if writer:
            writer.writerow(scan_row(rep))
        elif args.jsonl:
            out.write(dumps("scan.row", report_dict(rep)) + "\n")
        elif args.format == "human" and (rep.verdict.bounds or rep.anomaly or not rep.consistent):
            out.write(" ".join(str(c) for c in scan_row(rep)) + "\n")
    result = {"pmax": args.pmax, "squares_only": args.squares, "rows": summary.rows,
              "bounding": summary.bounding,
              "inconsistent": [[t.p, t.q, t.n] for t in summary.inconsistent],
              "anomalies": [[t.p, t.q, t.n] for t in summary.anomalies]}
    if args.jsonl:
        out.write(dumps("scan.summary", result) + "\n")
    elif args.csv:
        pass
    elif args.format == "json":
        out.write(dumps("scan.summary", result) + "\n")
    else:
        out.write(f"{summary.rows} rows, {summary.bounding} bounding, "
                  f"{len(summary.inconsistent)} inconsistent, {len(summary.anomalies)} anomalies\n")
    if args.csv and (summary.inconsistent or summary.anomalies):
        sys.stderr.write(f"{len(summary.inconsistent)} inconsistent, "
                         f"{len(summary.anomalies)} anomalies\n")
    return NEGATIVE if summary.inconsistent else OK


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("human", "json"), default="human")

    def triple_args(sp, optional=False):
        nargs = "?" if optional else None
        sp.add_argument("p", type=int, nargs=nargs)
        sp.add_argument("q", type=int, nargs=nargs)
        sp.add_argument("n", type=int, nargs=nargs)

    def budget_arg(sp):
        sp.add_argument("--lattice-budget", type=_budget, default=None,
                        help=f"node budget (default ${lattice.BUDGET_ENV} or {lattice.DEFAULT_BUDGET})")

    parser = _Parser(prog="qhball", description="Rational homology balls bounded by torus knot surgeries.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sp = sub.add_parser("seq", parents=[common], help="Fibonacci and Pell-type sequences")
    sp.add_argument("kind", choices=("fib", "R", "S", "T"))
    sp.add_argument("index", type=int)
    sp.add_argument("--count", type=int, default=1)
    sp.set_defaults(func=cmd_seq)

    sp = sub.add_parser("cfrac", help="negative continued fractions")
    ops = sp.add_subparsers(dest="op", required=True, parser_class=_Parser)
    o = ops.add_parser("expand", parents=[common])
    o.add_argument("value", type=_fraction)
    for name in ("eval", "dual", "stats"):
        o = ops.add_parser(name, parents=[common])
        o.add_argument("string", type=_string, help='e.g. "[2,2,3]" or "2^3"')
    sp.set_defaults(func=cmd_cfrac)

    sp = sub.add_parser("plumbing", parents=[common], help="plumbing tree of a surgery")
    triple_args(sp)
    sp.add_argument("--dot", action="store_true", help="print the tree in DOT format")
    sp.set_defaults(func=cmd_plumbing)

    sp = sub.add_parser("embed", parents=[common], help="lattice embedding search")
    triple_args(sp, optional=True)
    sp.add_argument("--gram", help="explicit Gram matrix as a JSON list of rows")
    budget_arg(sp)
    sp.set_defaults(func=cmd_embed)

    sp = sub.add_parser("floer", help="V invariants and correction terms")
    ops = sp.add_subparsers(dest="op", required=True, parser_class=_Parser)
    o = ops.add_parser("vseq", parents=[common])
    o.add_argument("p", type=int)
    o.add_argument("q", type=int)
    o = ops.add_parser("cable", parents=[common])
    o.add_argument("p", type=int)
    o.add_argument("q", type=int)
    o.add_argument("--base", type=_pair, required=True, help="torus knot p0,q0 being cabled")
    o = ops.add_parser("dtest", parents=[common])
    triple_args(o)
    o = ops.add_parser("bounds", parents=[common])
    o.add_argument("--nu", type=int, required=True)
    o.add_argument("--v0", type=int, required=True)
    o.add_argument("--q1", action="store_true", help="cable with q = 1")
    sp.set_defaults(func=cmd_floer)

    sp = sub.add_parser("lens", help="lens spaces bounding rational balls")
    ops = sp.add_subparsers(dest="op", required=True, parser_class=_Parser)
    for name in ("lens", "reducible"):
        o = ops.add_parser(name, parents=[common])
        o.add_argument("p", type=int)
        o.add_argument("q", type=int)
    o = ops.add_parser("string", parents=[common])
    o.add_argument("p", type=int)
    o.add_argument("q", type=int)
    o.add_argument("sign", type=_sign)
    sp.set_defaults(func=cmd_lens)

    sp = sub.add_parser("classify", parents=[common], help="does S^3_n(T(p,q)) bound?")
    triple_args(sp)
    sp.set_defaults(func=cmd_classify)

    sp = sub.add_parser("xcheck", parents=[common], help="family verdict against the obstructions")
    triple_args(sp)
    budget_arg(sp)
    sp.add_argument("--rank-cap", type=int, default=cl.DEFAULT_RANK_CAP)
    sp.set_defaults(func=cmd_xcheck)

    sp = sub.add_parser("scan", parents=[common], help="cross-check a grid of triples")
    sp.add_argument("--pmax", type=int, required=True)
    sp.add_argument("--squares", action="store_true", help="perfect-square n only")
    fmt = sp.add_mutually_exclusive_group()
    fmt.add_argument("--csv", action="store_true")
    fmt.add_argument("--jsonl", action="store_true")
    sp.add_argument("--lattice", action="store_true", help="also run the lattice search")
    budget_arg(sp)
    sp.add_argument("--rank-cap", type=int, default=cl.DEFAULT_RANK_CAP)
    sp.add_argument("--jobs", type=int, default=1, help="worker processes")
    sp.set_defaults(func=None)

    sp = sub.add_parser("families", parents=[common], help="list family members")
    sp.add_argument("--id", type=int, choices=range(1, 19), metavar="K")
    sp.add_argument("--count", type=int, default=5)
    sp.set_defaults(func=cmd_families)
    return parser


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "scan":
            if args.pmax < 3:
                raise UsageError("--pmax must be at least 3")
            if args.jobs < 1:
                raise UsageError("--jobs must be positive")
            return run_scan(args, out)
        code, name, payload, human = args.func(args)
    except UsageError as exc:
        err.write(f"qhball: error: {exc}\n")
        return USAGE
    except ValueError as exc:
        err.write(f"qhball: error: {exc}\n")
        return USAGE
    if args.format == "json":
        out.write(dumps(name, payload) + "\n")
    else:
        out.write(human + "\n")
    return code


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
