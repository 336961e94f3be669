"""Which positive integral surgeries on torus knots bound rational balls.

The answer is a list of eighteen families of triples (p, q; n): 1-5 are
Seifert fibred surgeries, 6-13 have n = pq (connected sums of two lens
spaces) and 14-18 have n = pq +- 1 (lens spaces).  This module enumerates
and recognises the families and cross-checks them against the
correction-term and lattice obstructions.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, isqrt
from typing import Callable, Iterator

from . import floer, lattice, plumbing
from .plumbing import SurgeryTriple
from .seq import SeqKind, fibonacci, pell


def _R(k): return pell(SeqKind.R, k)
def _S(k): return pell(SeqKind.S, k)
def _T(k): return pell(SeqKind.T, k)
def _F(k): return fibonacci(k)


def _pq(p, q):
    return (p, q, p * q)


@dataclass(frozen=True)
class _Branch:
    """One arithmetic progression of parameters of a family; p grows
    strictly with the position j."""

    family: int
    param: Callable[[int], int]
    triple: Callable[[int], tuple[int, int, int]]
    sign: int | None = None


def _lin(start, step=1):
    return lambda j: start + step * j


_BRANCHES: dict[int, list[_Branch]] = {
    1: [_Branch(1, _lin(2), lambda p: (p, p + 1, p * p))],
    2: [_Branch(2, _lin(2), lambda p: (p, p + 1, (p + 1) ** 2))],
    3: [_Branch(3, _lin(2), lambda p: (p, 4 * p - 1, 4 * p * p), -1),
        _Branch(3, _lin(2), lambda p: (p, 4 * p + 1, 4 * p * p), +1)],
    4: [_Branch(4, _lin(1), lambda k: (_R(k), _R(k + 1), _R(k) * _R(k + 1) - 2))],
    6: [_Branch(6, _lin(2), lambda r: _pq(r * r, (r + 1) ** 2))],
    7: [_Branch(7, _lin(2, 4), lambda r: _pq(r * r, (2 * r - 1) ** 2), -1),
        _Branch(7, _lin(2, 4), lambda r: _pq(r * r, (2 * r + 1) ** 2), +1)],
    # r = 5 mod 8 goes with 2r+2, r = 3 mod 8 with 2r-2
    8: [_Branch(8, _lin(11, 8), lambda r: _pq(r * r, (2 * r - 2) ** 2), -1),
        _Branch(8, _lin(5, 8), lambda r: _pq(r * r, (2 * r + 2) ** 2), +1)],
    9: [_Branch(9, _lin(3), lambda k: _pq(_F(k) ** 2, _F(k + 1) ** 2))],
    10: [_Branch(10, _lin(2), lambda k: _pq(_F(2 * k - 1) ** 2, _F(2 * k + 1) ** 2))],
    11: [_Branch(11, _lin(2), lambda k: _pq(_S(k) ** 2, 4 * _T(k) ** 2))],
    12: [_Branch(12, _lin(2), lambda k: _pq(4 * _T(k) ** 2, _S(k + 1) ** 2))],
    14: [_Branch(14, _lin(1), lambda r: (2 * r + 1, 2 * r + 3, 4 * (r + 1) ** 2))],
    # k = 1 would give p = F_2 = 1, outside p >= 2
    15: [_Branch(15, _lin(2), lambda k: (_F(2 * k), _F(2 * k + 2), _F(2 * k) * _F(2 * k + 2) + 1))],
    16: [_Branch(16, _lin(1), lambda k: (_F(2 * k + 1), _F(2 * k + 3), _F(2 * k + 1) * _F(2 * k + 3) - 1))],
    17: [_Branch(17, _lin(1), lambda k: (_F(2 * k + 1), _F(2 * k + 5), _F(2 * k + 1) * _F(2 * k + 5) - 1))],
    18: [_Branch(18, _lin(1), lambda k: (_S(k + 1), _S(k + 2), _S(k + 1) * _S(k + 2) - 1))],
}

SPORADIC = {
    5: ((3, 22, 64), (6, 43, 256)),
    13: (_pq(81, 196), _pq(121, 196)),
}

PARAM_NAME = {1: "p", 2: "p", 3: "p", 4: "k", 6: "r", 7: "r", 8: "r", 9: "k", 10: "k",
              11: "k", 12: "k", 14: "r", 15: "k", 16: "k", 17: "k", 18: "k"}

SET_OF = {i: ("G" if i <= 5 else "R" if i <= 13 else "L") for i in range(1, 19)}


@dataclass(frozen=True)
class FamilyTag:
    id: int
    param: int | None = None
    sign: int | None = None
    sporadic_index: int | None = None

    @property
    def sporadic(self) -> bool:
        return self.id in SPORADIC

    @property
    def family_set(self) -> str:
        return SET_OF[self.id]

    def triple(self) -> SurgeryTriple:
        if self.sporadic:
            return SurgeryTriple(*SPORADIC[self.id][self.sporadic_index])
        for br in _BRANCHES[self.id]:
            if br.sign == self.sign:
                return SurgeryTriple(*br.triple(self.param))
        raise ValueError(f"no branch with sign {self.sign} in family {self.id}")

    def label(self) -> str:
        if self.sporadic:
            return f"({self.id}) #{self.sporadic_index}"
        sign = "" if self.sign is None else ("+" if self.sign > 0 else "-")
        return f"({self.id}) {PARAM_NAME[self.id]}={self.param}{sign}"

    def as_dict(self) -> dict:
        return {"id": self.id, "param": self.param, "sign": self.sign,
                "sporadic_index": self.sporadic_index, "label": self.label()}


def _check_id(tag_id: int):
    if tag_id not in range(1, 19):
        raise ValueError(f"family id must be in 1..18, got {tag_id}")


def family_tags(tag_id: int) -> Iterator[FamilyTag]:
    """Members of a family in order of parameter (minus sign before plus)."""
    _check_id(tag_id)
    if tag_id in SPORADIC:
        for i in range(len(SPORADIC[tag_id])):
            yield FamilyTag(tag_id, sporadic_index=i)
        return
    branches = _BRANCHES[tag_id]
    for j in itertools.count():
        cands = sorted(((br.param(j), br.sign or 0, br) for br in branches),
                       key=lambda c: (c[0], c[1]))
        for param, _, br in cands:
            yield FamilyTag(tag_id, param, br.sign)


def family_enumerate(tag_id: int, index: int) -> SurgeryTriple:
    """The index-th member (from 0) of a family."""
    if index < 0:
        raise IndexError("index must be non-negative")
    if tag_id in SPORADIC and index >= len(SPORADIC[tag_id]):
        raise IndexError(f"family ({tag_id}) has only {len(SPORADIC[tag_id])} members")
    return family_tag(tag_id, index).triple()


def family_tag(tag_id: int, index: int) -> FamilyTag:
    return next(itertools.islice(family_tags(tag_id), index, None))


def family_triple(tag_id: int, param: int, sign: int | None = None) -> SurgeryTriple:
    """Member of a family by its natural parameter, e.g. (4, k=1)."""
    return FamilyTag(tag_id, param, sign).triple()


def _solve_branch(br: _Branch, t: SurgeryTriple) -> FamilyTag | None:
    # gallop then bisect on the position j; p is strictly increasing in j
    def p_at(j):
        return br.triple(br.param(j))[0]

    if p_at(0) > t.p:
        return None
    hi = 1
    while p_at(hi) < t.p:
        hi *= 2
    lo = 0
    while lo < hi:
        mid = (lo + hi) // 2
        if p_at(mid) < t.p:
            lo = mid + 1
        else:
            hi = mid
    if br.triple(br.param(lo)) == (t.p, t.q, t.n):
        return FamilyTag(br.family, br.param(lo), br.sign)
    return None


def family_members(t: SurgeryTriple) -> list[FamilyTag]:
    """Every family tag realising the triple, by increasing family id."""
    out = []
    for tag_id in range(1, 19):
        if tag_id in SPORADIC:
            for i, tr in enumerate(SPORADIC[tag_id]):
                if tr == (t.p, t.q, t.n):
                    out.append(FamilyTag(tag_id, sporadic_index=i))
            continue
        for br in _BRANCHES[tag_id]:
            tag = _solve_branch(br, t)
            if tag is not None:
                out.append(tag)
    return out


def family_member(t: SurgeryTriple) -> FamilyTag | None:
    found = family_members(t)
    return found[0] if found else None


NOT_SQUARE = "order of H1 not a square"


@dataclass(frozen=True)
class Verdict:
    bounds: bool
    witness: FamilyTag | None
    all_witnesses: tuple[FamilyTag, ...] = ()
    obstruction_note: str | None = None


def classify(t: SurgeryTriple) -> Verdict:
    tags = family_members(t)
    if tags:
        return Verdict(True, tags[0], tuple(tags))
    note = NOT_SQUARE if isqrt(t.n) ** 2 != t.n else None
    return Verdict(False, None, (), note)


DEFAULT_RANK_CAP = 16


@dataclass(frozen=True)
class Report:
    triple: SurgeryTriple
    verdict: Verdict
    dtest: floer.DInvVerdict
    lattice: lattice.DonaldsonVerdict | None
    lattice_note: str | None
    inconsistencies: tuple[str, ...]
    anomaly: bool

    @property
    def consistent(self) -> bool:
        return not self.inconsistencies

    def lattice_status(self) -> str:
        if self.lattice is None:
            return self.lattice_note or "skipped"
        return self.lattice.status.value


def cross_check(t: SurgeryTriple, budget: int | None = None,
                rank_cap: int = DEFAULT_RANK_CAP, use_lattice: bool = True) -> Report:
    """Family verdict next to the correction-term and lattice obstructions."""
    verdict = classify(t)
    dtest = floer.square_surgery_test(floer.torus_v(t.p, t.q), t.n)
    lat, note = None, None
    if t.excluded:
        note = "excluded"
    elif not use_lattice:
        note = "skipped"
    else:
        rank = plumbing.surgery_plumbing(t).rank
        if rank > rank_cap:
            note = f"rank {rank} above cap {rank_cap}"
        else:
            lat = lattice.donaldson_verdict(t, budget)
    bad = []
    if verdict.bounds and not dtest.passed:
        bad.append("bounding triple fails the correction-term test")
    if lat is not None and verdict.bounds and lat.status is lattice.Donaldson.OBSTRUCTED:
        bad.append("bounding triple is lattice-obstructed")
    anomaly = dtest.passed and not verdict.bounds
    return Report(t, verdict, dtest, lat, note, tuple(bad), anomaly)


def _ns(p: int, q: int, squares_only: bool):
    if squares_only:
        return [m * m for m in range(1, isqrt(p * q + 1) + 1)]
    return range(1, p * q + 2)


def pairs(p_max: int) -> list[tuple[int, int]]:
    """Coprime 2 <= p < q <= p_max in lexicographic order."""
    if p_max < 3:
        raise ValueError("p_max must be at least 3")
    return [(p, q) for p in range(2, p_max) for q in range(p + 1, p_max + 1) if gcd(p, q) == 1]


def triples(p_max: int, squares_only: bool) -> Iterator[SurgeryTriple]:
    for p, q in pairs(p_max):
        for n in _ns(p, q, squares_only):
            yield SurgeryTriple(p, q, n)


def _scan_pair(job) -> list[Report]:
    p, q, squares_only, budget, rank_cap, use_lattice = job
    return [cross_check(SurgeryTriple(p, q, n), budget, rank_cap, use_lattice)
            for n in _ns(p, q, squares_only)]


def scan(p_max: int, squares_only: bool = True, budget: int | None = None,
         rank_cap: int = DEFAULT_RANK_CAP, use_lattice: bool = False,
         workers: int = 1) -> Iterator[Report]:
    """Cross-check every coprime 2 <= p < q <= p_max, streamed in (p, q, n) order.

    With workers > 1 the (p, q) grid is sharded over processes; the output
    order does not depend on the number of workers.
    """
    jobs = [(p, q, squares_only, budget, rank_cap, use_lattice) for p, q in pairs(p_max)]
    if workers <= 1:
        for job in jobs:
            yield from _scan_pair(job)
        return
    from concurrent.futures import ProcessPoolExecutor
    with ProcessPoolExecutor(workers) as pool:
        for chunk in pool.map(_scan_pair, jobs, chunksize=4):
            yield from chunk


@dataclass
class ScanSummary:
    rows: int = 0
    bounding: int = 0
    inconsistent: list = field(default_factory=list)
    anomalies: list = field(default_factory=list)

    def add(self, report: Report):
        self.rows += 1
        self.bounding += report.verdict.bounds
        if not report.consistent:
            self.inconsistent.append(report.triple)
        if report.anomaly:
            self.anomalies.append(report.triple)


# accumulation points of q/p

@dataclass(frozen=True)
class QuadraticIrrational:
    """(a + b sqrt(d)) / c with integers, c > 0, d >= 0 squarefree or 0."""

    name: str
    a: int
    b: int
    d: int
    c: int

    def approx(self, digits: int = 40) -> tuple[Fraction, Fraction]:
        """A rational approximant and a bound on its error."""
        scale = 10 ** digits
        root = Fraction(isqrt(self.d * scale * scale), scale)
        value = (self.a + self.b * root) / self.c
        return value, Fraction(abs(self.b), self.c * scale)

    def distance_below(self, x: Fraction, eps: Fraction) -> bool:
        """Exact test of |x - self| < eps."""
        # |x - v| < eps  <=>  c(x - eps) - a < b sqrt(d) < c(x + eps) - a
        lo, hi = self.c * (x - eps) - self.a, self.c * (x + eps) - self.a
        return _lt_root(lo, self.b, self.d) and _lt_root(-hi, -self.b, self.d)

    def __float__(self):
        return (self.a + self.b * self.d ** 0.5) / self.c


def _lt_root(x: Fraction, b: int, d: int) -> bool:
    """x < b sqrt(d)."""
    if b >= 0:
        return x < 0 or x * x < b * b * d
    return x < 0 and x * x > b * b * d


ONE = QuadraticIrrational("1", 1, 0, 0, 1)
FOUR = QuadraticIrrational("4", 4, 0, 0, 1)
PHI2 = QuadraticIrrational("phi^2", 3, 1, 5, 2)
PHI4 = QuadraticIrrational("phi^4", 7, 3, 5, 2)
PSI = QuadraticIrrational("psi", 3, 2, 2, 1)
LIMITS = (ONE, PHI2, FOUR, PSI, PHI4)

LIMIT_OF = {1: ONE, 2: ONE, 3: FOUR, 4: PSI, 6: ONE, 7: FOUR, 8: FOUR, 9: PHI2,
            10: PHI4, 11: PSI, 12: PSI, 14: ONE, 15: PHI2, 16: PHI2, 17: PHI4, 18: PSI}

MAX_RATIO = Fraction(22, 3)


def accumulation_check(tag_id: int, index: int) -> Fraction:
    """q/p of the index-th member of an infinite family."""
    _check_id(tag_id)
    if tag_id in SPORADIC:
        raise ValueError(f"family ({tag_id}) is sporadic")
    t = family_enumerate(tag_id, index)
    return Fraction(t.q, t.p)
