"""Lens spaces bounding rational homology balls, via string families.

The lens space L(p, q) is attached to the string of p/q.  Families come in
two kinds: two-parameter templates (B1, B2, C1, C2, C3, D1, D2) and
templates built around a string b and its dual c (A, B3, D3, E), where b
and c are both read outward from the distinguished middle.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt

from . import cfrac
from .cfrac import WeightString

FAMILIES = ("A", "B1", "B2", "B3", "C1", "C2", "C3", "D1", "D2", "D3", "E")
GROUP_I = {"A": -3, "B": -2, "C": -1, "D": 0, "E": 1}
_B_FAMILIES = ("A", "B3", "D3", "E")


def _twos(t: int) -> tuple[int, ...]:
    return (2,) * t


def _st_template(family: str, s: int, t: int) -> WeightString:
    if family == "B1":
        return _twos(t) + (3, s + 2, t + 2, 3) + _twos(s)
    if family == "B2":
        return _twos(t) + (s + 3, 2, t + 2, 3) + _twos(s)
    if family == "C1":
        return (t + 2, s + 2, 3) + _twos(t) + (4,) + _twos(s)
    if family == "C2":
        return (t + 2, 2, s + 3) + _twos(t) + (4,) + _twos(s)
    if family == "C3":
        return (t + 3, 2, s + 3, 3) + _twos(t) + (3,) + _twos(s)
    if family == "D1":
        return (t + 3, 3) + _twos(s) + (3,) + _twos(t) + (3, s + 3)
    if family == "D2":
        return (t + 3,) + _twos(s) + (4,) + _twos(t) + (3, s + 2)
    raise KeyError(family)


def _st_in_range(family: str, s: int, t: int) -> bool:
    if family == "B1":
        return s >= t > 0
    if family == "B2":
        return s >= 0 and t > 0
    if family == "C1":
        return s > 0 and t >= 0
    if family == "D1":
        return s >= t >= 0
    return s >= 0 and t >= 0


def _b_template(family: str, b: WeightString) -> WeightString:
    c = cfrac.dual(b)
    left = cfrac.reverse(b)
    if family == "A":
        return left + (2,) + c
    if family == "B3":
        return left[:-1] + (b[0] + 1, 2, 2, c[0] + 1) + c[1:]
    if family == "D3":
        return left + (5,) + c
    if family == "E":
        return left[:-1] + (b[0] + c[0],) + c[1:]
    raise KeyError(family)


@dataclass(frozen=True)
class LiscaTag:
    family: str
    s: int | None = None
    t: int | None = None
    b: WeightString | None = None
    reversed: bool = False

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family}")
        if self.b is None:
            if self.family in _B_FAMILIES:
                raise ValueError(f"family {self.family} takes a string b")
            if self.s is None or self.t is None or not _st_in_range(self.family, self.s, self.t):
                raise ValueError(f"parameters out of range for {self.family}: s={self.s}, t={self.t}")
        elif self.family not in _B_FAMILIES:
            raise ValueError(f"family {self.family} takes (s, t) parameters")

    @property
    def group(self) -> str:
        return self.family[0]

    @property
    def c(self) -> WeightString | None:
        return None if self.b is None else cfrac.dual(self.b)

    def xy(self) -> tuple[int, int, int] | None:
        """(x, y, y*) with x/y the value of b, for the b-families."""
        if self.b is None:
            return None
        v = cfrac.evaluate(self.b)
        x, y = v.numerator, v.denominator
        return x, y, cfrac.mod_inverse(y, x)

    def template(self) -> WeightString:
        if self.b is None:
            return _st_template(self.family, self.s, self.t)
        return _b_template(self.family, self.b)

    def string(self) -> WeightString:
        ws = self.template()
        return cfrac.reverse(ws) if self.reversed else ws

    def lens_value(self) -> Fraction | None:
        """The closed-form p/q of the b-families."""
        if self.b is None:
            return None
        x, _, ys = self.xy()
        if self.family == "A":
            return Fraction(x * x, x * ys + 1)
        if self.family == "B3":
            return Fraction(4 * x * x, 4 * x * ys - 1)
        if self.family == "D3":
            return Fraction(4 * x * x, 4 * x * ys + 1)
        return Fraction(x * x, x * ys - 1)

    def label(self) -> str:
        core = (f"{self.family}[b={list(self.b)}]" if self.b is not None
                else f"{self.family}(s={self.s},t={self.t})")
        return core + (" reversed" if self.reversed else "")


def _match_b(family: str, ws: WeightString) -> LiscaTag | None:
    n = len(ws)
    for i in range(n):
        if family == "A" and ws[i] == 2:
            if i == 0 or i == n - 1:
                continue
            b = cfrac.reverse(ws[:i])
            cands = [b]
        elif family == "D3" and ws[i] == 5:
            if i == 0 or i == n - 1:
                continue
            cands = [cfrac.reverse(ws[:i])]
        elif family == "B3" and i + 1 < n and ws[i] == 2 and ws[i + 1] == 2:
            if i == 0 or i + 2 >= n or ws[i - 1] < 3:
                continue
            left = cfrac.reverse(ws[:i])
            cands = [(left[0] - 1,) + left[1:]]
        elif family == "E":
            left = cfrac.reverse(ws[:i])
            cands = [(b1,) + left for b1 in range(2, ws[i] - 1)]
        else:
            continue
        for b in cands:
            tag = LiscaTag(family, b=b)
            if tag.template() == ws:
                return tag
    return None


def _st_candidates(family: str, ws: WeightString):
    """Parameter guesses read off the string; the template check decides."""
    n = len(ws)
    lead = next((i for i, a in enumerate(ws) if a != 2), n)
    trail = next((i for i, a in enumerate(reversed(ws)) if a != 2), n)
    if family == "B1":
        yield trail, lead
    elif family == "B2" and lead < n:
        yield ws[lead] - 3, lead
    elif family == "C1" and n >= 2:
        yield ws[1] - 2, ws[0] - 2
    elif family == "C2" and n >= 3:
        yield ws[2] - 3, ws[0] - 2
    elif family == "C3" and n >= 3:
        yield ws[2] - 3, ws[0] - 3
    elif family == "D1":
        yield ws[-1] - 3, ws[0] - 3
    elif family == "D2":
        yield ws[-1] - 2, ws[0] - 3


def _match_exact(ws: WeightString) -> LiscaTag | None:
    for family in FAMILIES:
        if family in ("A", "B3", "D3", "E"):
            tag = _match_b(family, ws)
            if tag is not None:
                return tag
            continue
        for s, t in _st_candidates(family, ws):
            if _st_in_range(family, s, t) and _st_template(family, s, t) == ws:
                return LiscaTag(family, s=s, t=t)
    return None


def recognize_string(ws) -> LiscaTag | None:
    """A family tag whose string is ``ws`` (or its reversal, flagged), or None.

    Families are tried in the order A, B1, B2, B3, C1, ..., E and the first
    hit wins, for the string itself before its reversal.
    """
    ws = cfrac.weight_string(ws)
    # each family has a fixed I-value in [-3, 1]; reject everything else early
    if not GROUP_I["A"] <= cfrac.stats(ws).i_value <= GROUP_I["E"]:
        return None
    tag = _match_exact(ws)
    if tag is not None:
        return tag
    rev = cfrac.reverse(ws)
    if rev != ws:
        tag = _match_exact(rev)
        if tag is not None:
            return LiscaTag(tag.family, tag.s, tag.t, tag.b, reversed=True)
    return None


def enumerate_tags(max_param: int, max_b_weight: int):
    """Every tag with s, t <= max_param and b of J-value <= max_b_weight."""
    for family in FAMILIES:
        if family in ("A", "B3", "D3", "E"):
            for b in _strings_with_j_at_most(max_b_weight):
                if family == "B3" and len(b) == 0:
                    continue
                yield LiscaTag(family, b=b)
        else:
            for s in range(max_param + 1):
                for t in range(max_param + 1):
                    if _st_in_range(family, s, t):
                        yield LiscaTag(family, s=s, t=t)


def _strings_with_j_at_most(j: int):
    def rec(prefix, budget):
        if prefix:
            yield tuple(prefix)
        for a in range(2, budget + 2):
            yield from rec(prefix + [a], budget - (a - 1))
    yield from rec([], j)


@dataclass(frozen=True)
class LensSpace:
    p: int
    q: int

    def __post_init__(self):
        if self.p < 2:
            raise ValueError("lens space order must be at least 2")
        object.__setattr__(self, "q", self.q % self.p)
        if self.q == 0 or gcd(self.p, self.q) != 1:
            raise ValueError(f"L({self.p}, {self.q}): q must be a unit mod p")


def lens_bounds(lens: LensSpace) -> LiscaTag | None:
    """Tag for the first of p/q, p/(p-q) (each possibly reversed) that lies
    in a family, or None when L(p, q) bounds no rational homology ball."""
    p, q = lens.p, lens.q
    for value in (Fraction(p, q), Fraction(p, p - q)):
        tag = recognize_string(cfrac.expand(value))
        if tag is not None:
            return tag
    return None


def reducible_bounds(p: int, q: int) -> bool:
    """Does L(p, -q) # L(q, -p) (that is, pq-surgery on T(p,q)) bound?"""
    if p < 2 or q <= p or gcd(p, q) != 1:
        raise ValueError(f"need coprime 2 <= p < q, got ({p}, {q})")
    for a, b in ((p, q), (q, p)):
        if isqrt(a) ** 2 != a:
            return False
    return (lens_bounds(LensSpace(p, -q)) is not None
            and lens_bounds(LensSpace(q, -p)) is not None)


def reducible_strings(p: int, q: int) -> tuple[WeightString, WeightString]:
    """(long, short) strings of the two summands: expand(q/p) = [k+1] + short
    with short = expand(p/(p-r)), q = kp + r."""
    k, r = divmod(q, p)
    return cfrac.expand(Fraction(q, p)), cfrac.expand(Fraction(p, p - r))


def lens_surgery_string(p: int, q: int, sign: int) -> WeightString:
    """String of (pq + sign)/p^2, the lens space of (pq +- 1)-surgery."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    if p < 2 or gcd(p, q) != 1 or p * q + sign < 2:
        raise ValueError(f"degenerate lens surgery for ({p}, {q}, {sign:+d})")
    return cfrac.expand(Fraction(p * q + sign, p * p))


def lens_surgery_bounds(p: int, q: int, sign: int) -> LiscaTag | None:
    n = p * q + sign
    return lens_bounds(LensSpace(n, q * q))
