"""Negative continued fractions [a1, ..., an] = a1 - 1/(a2 - 1/(... - 1/an)).

A weight string is a tuple of ints >= 2, stored outermost coefficient first.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable

WeightString = tuple[int, ...]


def weight_string(entries: Iterable[int]) -> WeightString:
    ws = tuple(int(a) for a in entries)
    if not ws:
        raise ValueError("weight string must be nonempty")
    if min(ws) < 2:
        raise ValueError(f"weight string entries must be >= 2: {ws}")
    return ws


def expand(value) -> WeightString:
    """The unique string with entries >= 2 evaluating to ``value`` (> 1)."""
    value = Fraction(value)
    if value <= 1:
        raise ValueError(f"no expansion with entries >= 2 for {value}")
    x, y = value.numerator, value.denominator
    out = []
    while y:
        a = -(-x // y)
        out.append(a)
        x, y = y, a * y - x
    return tuple(out)


def evaluate(ws: Iterable[int]) -> Fraction:
    num, den = _evaluate_pair(tuple(ws))
    return Fraction(num, den)


def _evaluate_pair(ws: WeightString) -> tuple[int, int]:
    num, den = 1, 0
    for a in reversed(ws):
        num, den = a * num - den, num
    return num, den


def dual(ws: Iterable[int]) -> WeightString:
    """Complementary string: x/y goes to x/(x - y)."""
    x, y = _evaluate_pair(tuple(ws))
    return expand(Fraction(x, x - y))


def reverse(ws: Iterable[int]) -> WeightString:
    return tuple(reversed(tuple(ws)))


@dataclass(frozen=True)
class StringStats:
    i_value: int
    j_value: int


def stats(ws: Iterable[int]) -> StringStats:
    ws = tuple(ws)
    return StringStats(sum(a - 3 for a in ws), sum(a - 1 for a in ws))


def mod_inverse(y: int, x: int) -> int:
    """The representative 0 < y* < x of the inverse of y modulo x."""
    if x < 2 or gcd(y, x) != 1:
        raise ValueError(f"{y} is not invertible modulo {x}")
    return pow(y, -1, x)


@dataclass(frozen=True)
class RDiagram:
    """Rows of dots; row j holds a_j - 1 dots and starts where row j-1 ended.

    Points are (x, y) with the first row at the top.
    """

    rows: tuple[int, ...]
    offsets: tuple[int, ...]

    @classmethod
    def of(cls, ws: Iterable[int]) -> "RDiagram":
        ws = weight_string(ws)
        offsets, x = [], 0
        for a in ws:
            offsets.append(x)
            x += a - 2
        return cls(tuple(a - 1 for a in ws), tuple(offsets))

    def points(self) -> list[tuple[int, int]]:
        m = len(self.rows)
        return [(x0 + i, m - 1 - j)
                for j, (count, x0) in enumerate(zip(self.rows, self.offsets))
                for i in range(count)]

    def reflect(self) -> "RDiagram":
        """Reflection across the line x + y = 0, regrouped into rows."""
        pts = [(-y, -x) for x, y in self.points()]
        by_row: dict[int, list[int]] = {}
        for x, y in pts:
            by_row.setdefault(y, []).append(x)
        ys = sorted(by_row, reverse=True)
        rows = tuple(len(by_row[y]) for y in ys)
        offsets = tuple(min(by_row[y]) - min(by_row[ys[0]]) for y in ys)
        return RDiagram(rows, offsets)

    def string(self) -> WeightString:
        return tuple(c + 1 for c in self.rows)


def dual_by_diagram(ws: Iterable[int]) -> WeightString:
    """Dual string read off the reflected diagram (independent of ``dual``)."""
    return RDiagram.of(ws).reflect().string()


def parse_string(text: str) -> WeightString:
    """Parse "[2,2,3]" or "2,2,3"; exponent shorthand "2^3" repeats an entry."""
    body = text.strip().strip("[]")
    out: list[int] = []
    for part in body.split(","):
        part = part.strip()
        if not part:
            continue
        if "^" in part:
            a, t = part.split("^")
            out.extend([int(a)] * int(t))
        else:
            out.append(int(part))
    return weight_string(out)
