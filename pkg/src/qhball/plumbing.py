"""Star-shaped positive definite plumbing trees for n-surgery on T(p,q).

For 1 <= n <= pq-2 the surgery bounds the tree called GAMMA1 here; for
n >= pq+2 its orientation reversal bounds GAMMA2.  Write q = k p + r with
1 <= r <= p-1, N = |pq - n| - 1, p/r = [a_n, ..., a_1] and
p/(p-r) = [b_m, ..., b_1].  Legs are stored innermost first, so a leg
(a_1, ..., a_n) starts next to the central weight-2 vertex.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from . import cfrac


class Kind(enum.Enum):
    GAMMA1 = "Gamma1"
    GAMMA2 = "Gamma2"


class ExcludedSurgery(ValueError):
    """n in {pq-1, pq, pq+1}: a lens space or a reducible manifold."""


@dataclass(frozen=True, order=True)
class SurgeryTriple:
    p: int
    q: int
    n: int

    def __post_init__(self):
        if self.p < 2 or self.q <= self.p:
            raise ValueError(f"need 2 <= p < q, got ({self.p}, {self.q})")
        if gcd(self.p, self.q) != 1:
            raise ValueError(f"p and q must be coprime, got ({self.p}, {self.q})")
        if self.n < 1:
            raise ValueError(f"n must be positive, got {self.n}")

    @property
    def excluded(self) -> bool:
        return abs(self.p * self.q - self.n) <= 1


@dataclass(frozen=True)
class PlumbingTree:
    weights: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]
    kind: Kind
    k: int
    r: int
    N: int
    a_leg: cfrac.WeightString
    b_leg: cfrac.WeightString
    legs: tuple[tuple[int, ...], ...] = field(default=())

    @property
    def rank(self) -> int:
        return len(self.weights)

    @property
    def reversed_boundary(self) -> bool:
        """True when the tree bounds -S^3_n rather than S^3_n."""
        return self.kind is Kind.GAMMA2

    def vertices(self) -> list[tuple[int, int]]:
        return list(enumerate(self.weights))

    def degree(self, v: int) -> int:
        return sum(v in e for e in self.edges)

    def i_value(self) -> int:
        return sum(w - 3 for w in self.weights)

    def to_dot(self) -> str:
        lines = ["graph plumbing {"]
        for v, w in enumerate(self.weights):
            lines.append(f'  {v} [label="{w}"];')
        for u, v in self.edges:
            lines.append(f"  {u} -- {v};")
        lines.append("}")
        return "\n".join(lines)


def _star(legs) -> tuple[tuple[int, ...], tuple[tuple[int, int], ...], tuple]:
    weights = [2]
    edges = []
    ids = []
    for leg in legs:
        prev = 0
        leg_ids = []
        for w in leg:
            v = len(weights)
            weights.append(w)
            edges.append((prev, v))
            leg_ids.append(v)
            prev = v
        ids.append(tuple(leg_ids))
    return tuple(weights), tuple(edges), tuple(ids)


def surgery_plumbing(t: SurgeryTriple) -> PlumbingTree:
    p, q, n = t.p, t.q, t.n
    if t.excluded:
        raise ExcludedSurgery(f"n = {n} is pq-1, pq or pq+1 for (p, q) = ({p}, {q})")
    k, r = divmod(q, p)
    N = abs(p * q - n) - 1
    a = cfrac.reverse(cfrac.expand(Fraction(p, r)))
    b = cfrac.reverse(cfrac.expand(Fraction(p, p - r)))
    if n < p * q:
        kind = Kind.GAMMA1
        legs = (a, b + (k + 1,), (2,) * N)
    else:
        kind = Kind.GAMMA2
        legs = (a[:-1] + (a[-1] + 1,) + (2,) * (k - 1), b, (2,) * N)
    weights, edges, _ = _star(legs)
    return PlumbingTree(weights, edges, kind, k, r, N, a, b, legs)


class GramMatrix:
    """Symmetric integer matrix kept sparsely: a diagonal and a dict of
    off-diagonal entries keyed by (i, j) with i < j."""

    __slots__ = ("diag", "off")

    def __init__(self, diag, off=None):
        self.diag = tuple(int(d) for d in diag)
        self.off = {}
        for (i, j), v in (off or {}).items():
            if i == j:
                raise ValueError("diagonal entries go in diag")
            if v:
                self.off[(min(i, j), max(i, j))] = int(v)

    @classmethod
    def from_rows(cls, rows) -> "GramMatrix":
        rows = [list(map(int, row)) for row in rows]
        n = len(rows)
        if any(len(row) != n for row in rows):
            raise ValueError("Gram matrix must be square")
        off = {}
        for i in range(n):
            for j in range(i + 1, n):
                if rows[i][j] != rows[j][i]:
                    raise ValueError("Gram matrix must be symmetric")
                if rows[i][j]:
                    off[(i, j)] = rows[i][j]
        return cls([rows[i][i] for i in range(n)], off)

    @classmethod
    def path(cls, ws) -> "GramMatrix":
        ws = cfrac.weight_string(ws)
        return cls(ws, {(i, i + 1): 1 for i in range(len(ws) - 1)})

    @property
    def order(self) -> int:
        return len(self.diag)

    def entry(self, i: int, j: int) -> int:
        if i == j:
            return self.diag[i]
        return self.off.get((min(i, j), max(i, j)), 0)

    def rows(self) -> list[list[int]]:
        n = self.order
        out = [[0] * n for _ in range(n)]
        for i, d in enumerate(self.diag):
            out[i][i] = d
        for (i, j), v in self.off.items():
            out[i][j] = out[j][i] = v
        return out

    def neighbours(self) -> list[list[int]]:
        nb = [[] for _ in range(self.order)]
        for i, j in self.off:
            nb[i].append(j)
            nb[j].append(i)
        return nb

    def is_forest(self) -> bool:
        parent = list(range(self.order))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for i, j in self.off:
            a, b = find(i), find(j)
            if a == b:
                return False
            parent[a] = b
        return True

    def __eq__(self, other):
        return isinstance(other, GramMatrix) and self.diag == other.diag and self.off == other.off

    def __repr__(self):
        return f"GramMatrix({self.rows()})"


def gram(tree: PlumbingTree) -> GramMatrix:
    return GramMatrix(tree.weights, {e: 1 for e in tree.edges})


def bareiss_determinant(rows) -> int:
    """Fraction-free Gaussian elimination (exact for integer matrices)."""
    a = [list(map(int, row)) for row in rows]
    n = len(a)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        akk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i, row_k = a[i], a[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * akk - aik * row_k[j]) // prev
        prev = akk
    return sign * a[n - 1][n - 1]


def forest_pivots(g: GramMatrix) -> list[Fraction]:
    """Pivots of symmetric elimination in leaves-first order (forest Grams only).

    Eliminating a leaf u attached to v replaces g[v][v] by
    g[v][v] - g[u][v]**2 / pivot(u) and creates no fill, so the pivots
    multiply to the determinant and are all positive exactly when g is
    positive definite.
    """
    nb = g.neighbours()
    n = g.order
    val = [Fraction(d) for d in g.diag]
    seen = [False] * n
    pivots = []
    for root in range(n):
        if seen[root]:
            continue
        order, parent = [], {root: None}
        stack = [root]
        seen[root] = True
        while stack:
            v = stack.pop()
            order.append(v)
            for u in nb[v]:
                if not seen[u]:
                    seen[u] = True
                    parent[u] = v
                    stack.append(u)
        for v in reversed(order):
            piv = val[v]
            pivots.append(piv)
            par = parent[v]
            if par is not None and piv != 0:
                val[par] -= Fraction(g.entry(v, par) ** 2) / piv
            elif par is not None:
                # singular pivot: the determinant is zero; keep going so the
                # caller still gets a full list
                pass
    return pivots


def determinant(g: GramMatrix) -> int:
    """Exact determinant.  Forest-shaped Grams use leaf elimination, which is
    linear in the order; anything else goes through Bareiss."""
    if g.is_forest():
        pivots = forest_pivots(g)
        if any(p == 0 for p in pivots):
            return bareiss_determinant(g.rows())
        det = Fraction(1)
        for p in pivots:
            det *= p
        return int(det)
    return bareiss_determinant(g.rows())


def leading_minors(rows) -> list[int]:
    rows = [list(r) for r in rows]
    return [bareiss_determinant([r[:k] for r in rows[:k]]) for k in range(1, len(rows) + 1)]


def is_positive_definite(g: GramMatrix) -> bool:
    if g.is_forest():
        return all(p > 0 for p in forest_pivots(g))
    return all(m > 0 for m in leading_minors(g.rows()))


@dataclass(frozen=True)
class SeifertData:
    e0: int
    fractions: tuple[Fraction, Fraction, Fraction]

    @property
    def det_zero(self) -> bool:
        """e0 equal to the sum of the reciprocals of the three fractions."""
        return self.e0 == sum(1 / f for f in self.fractions)


def seifert_invariants(t: SurgeryTriple) -> SeifertData:
    p, q, n = t.p, t.q, t.n
    if t.excluded:
        raise ExcludedSurgery(f"n = {n} is pq-1, pq or pq+1 for (p, q) = ({p}, {q})")
    q_star = cfrac.mod_inverse(q % p, p)
    p_star = cfrac.mod_inverse(p % q, q)
    d = p * q - n
    data = SeifertData(2, (Fraction(p, q_star), Fraction(q, p_star), Fraction(d, d - 1)))
    assert not data.det_zero
    return data
