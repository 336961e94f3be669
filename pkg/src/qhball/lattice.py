"""Embeddings of positive definite integral lattices into the standard
lattice Z^n of the same rank, i.e. integer matrices A with A^T A = G.

The search places one column at a time.  Coordinates that no placed column
uses yet are interchangeable (and can be negated), so a new column only
ever touches them in canonical form: a weakly decreasing run of positive
entries on the first unused coordinates.
"""
from __future__ import annotations

import enum
import os
from dataclasses import dataclass
from math import isqrt

from . import plumbing
from .plumbing import GramMatrix, SurgeryTriple

DEFAULT_BUDGET = 10 ** 8
BUDGET_ENV = "QHBALL_LATTICE_BUDGET"


def default_budget() -> int:
    value = os.environ.get(BUDGET_ENV)
    return int(value) if value else DEFAULT_BUDGET


class Status(enum.Enum):
    FOUND = "Found"
    NONE = "None"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class Embedding:
    """coords[row][col]: row = basis vector of Z^n, col = lattice generator."""

    coords: tuple[tuple[int, ...], ...]

    @classmethod
    def from_columns(cls, columns) -> "Embedding":
        columns = [list(c) for c in columns]
        rows = len(columns[0]) if columns else 0
        return cls(tuple(tuple(col[r] for col in columns) for r in range(rows)))

    def columns(self) -> list[tuple[int, ...]]:
        return [tuple(row[c] for row in self.coords) for c in range(len(self.coords[0]))]


@dataclass(frozen=True)
class EmbeddingResult:
    status: Status
    embedding: Embedding | None
    nodes_explored: int
    budget_hit: bool


def verify_embedding(g: GramMatrix, e: Embedding) -> bool:
    cols = e.columns()
    if len(cols) != g.order:
        return False
    for i in range(g.order):
        for j in range(i, g.order):
            if sum(a * b for a, b in zip(cols[i], cols[j])) != g.entry(i, j):
                return False
    return True


@dataclass(frozen=True)
class EmbeddingProfile:
    hit_counts: tuple[int, ...]
    contributions: tuple[int, ...]

    @property
    def total(self) -> int:
        return sum(self.contributions)


def embedding_profile(e: Embedding) -> EmbeddingProfile:
    hits = tuple(sum(1 for a in row if a) for row in e.coords)
    contrib = tuple(sum(a * a for a in row) - 3 for row in e.coords)
    return EmbeddingProfile(hits, contrib)


def _search_order(g: GramMatrix) -> list[int]:
    nb = g.neighbours()
    n = g.order
    seen = [False] * n
    order = []
    while len(order) < n:
        start = max((v for v in range(n) if not seen[v]), key=lambda v: (len(nb[v]), -v))
        stack = [start]
        while stack:
            v = stack.pop()
            if seen[v]:
                continue
            seen[v] = True
            order.append(v)
            for u in sorted(nb[v], reverse=True):
                if not seen[u]:
                    stack.append(u)
    return order


def _square_partitions(total: int, slots: int, cap: int):
    """Weakly decreasing positive a_1 >= a_2 >= ... with sum a_i^2 = total,
    at most ``slots`` parts, every part <= cap."""
    if total == 0:
        yield ()
        return
    if slots == 0:
        return
    for a in range(min(cap, isqrt(total)), 0, -1):
        for rest in _square_partitions(total - a * a, slots - 1, a):
            yield (a,) + rest


class _BudgetExceeded(Exception):
    pass


def find_embedding(g: GramMatrix, budget: int | None = None) -> EmbeddingResult:
    """Search for A with A^T A = g.  ``budget`` limits search nodes; running
    out gives INCONCLUSIVE rather than a verdict."""
    if budget is None:
        budget = default_budget()
    if not plumbing.is_positive_definite(g):
        raise ValueError("Gram matrix must be positive definite")
    n = g.order
    det = plumbing.determinant(g)
    if isqrt(det) ** 2 != det:
        return EmbeddingResult(Status.NONE, None, 0, False)

    order = _search_order(g)
    weights = [g.diag[v] for v in order]
    # targets[i][j] = <v_order[i], v_order[j]> for j < i
    targets = [[g.entry(order[i], order[j]) for j in range(i)] for i in range(n)]
    placed: list[list[int]] = []
    nodes = 0

    def extend(i: int, used: int):
        nonlocal nodes
        if i == n:
            return True
        w = weights[i]
        tgt = targets[i]
        m = len(placed)
        # suffix[c][j]: squared norm of placed[j] on coordinates c..used-1
        suffix = [[0] * m for _ in range(used + 1)]
        for c in range(used - 1, -1, -1):
            row, nxt = suffix[c], suffix[c + 1]
            for j in range(m):
                x = placed[j][c]
                row[j] = nxt[j] + x * x
        x = [0] * n
        partial = [0] * m

        def coord(c: int, rem: int):
            nonlocal nodes
            nodes += 1
            if nodes > budget:
                raise _BudgetExceeded
            if c == used:
                if any(partial[j] != tgt[j] for j in range(m)):
                    return False
                for parts in _square_partitions(rem, n - used, isqrt(rem)):
                    for idx, a in enumerate(parts):
                        x[used + idx] = a
                    placed.append(list(x))
                    if extend(i + 1, used + len(parts)):
                        return True
                    placed.pop()
                    for idx in range(len(parts)):
                        x[used + idx] = 0
                return False
            suf = suffix[c]
            nxt = suffix[c + 1]
            column = [placed[j][c] for j in range(m)]
            bound = isqrt(rem)
            for a in _values(bound):
                rem2 = rem - a * a
                ok = True
                for j in range(m):
                    if column[j]:
                        partial[j] += a * column[j]
                for j in range(m):
                    need = tgt[j] - partial[j]
                    s = nxt[j]
                    if s == 0:
                        if need:
                            ok = False
                            break
                    elif need * need > rem2 * s:
                        ok = False
                        break
                if ok:
                    x[c] = a
                    if coord(c + 1, rem2):
                        return True
                    x[c] = 0
                for j in range(m):
                    if column[j]:
                        partial[j] -= a * column[j]
            return False

        return coord(0, w)

    try:
        found = extend(0, 0)
    except _BudgetExceeded:
        return EmbeddingResult(Status.INCONCLUSIVE, None, nodes, True)
    if not found:
        return EmbeddingResult(Status.NONE, None, nodes, False)
    columns = [None] * n
    for i, v in enumerate(order):
        columns[v] = placed[i]
    emb = Embedding.from_columns(columns)
    assert verify_embedding(g, emb)
    return EmbeddingResult(Status.FOUND, emb, nodes, False)


def _values(bound: int):
    yield 0
    for a in range(1, bound + 1):
        yield a
        yield -a


class Donaldson(enum.Enum):
    OBSTRUCTED = "Obstructed"
    UNOBSTRUCTED = "Unobstructed"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class DonaldsonVerdict:
    status: Donaldson
    embedding: Embedding | None
    nodes_explored: int
    rank: int


def donaldson_verdict(t: SurgeryTriple, budget: int | None = None) -> DonaldsonVerdict:
    """Embedding test for the plumbing lattice of the triple.  OBSTRUCTED
    certifies that the surgery bounds no rational homology ball."""
    tree = plumbing.surgery_plumbing(t)
    res = find_embedding(plumbing.gram(tree), budget)
    status = {Status.FOUND: Donaldson.UNOBSTRUCTED,
              Status.NONE: Donaldson.OBSTRUCTED,
              Status.INCONCLUSIVE: Donaldson.INCONCLUSIVE}[res.status]
    return DonaldsonVerdict(status, res.embedding, res.nodes_explored, tree.rank)
