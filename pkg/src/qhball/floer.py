"""V_i invariants, cabling, and correction terms of integral surgeries.

V sequences are stored densely up to nu+ (the first index where V vanishes);
indices past the end read as 0, and negative indices use V_{-j} = V_j + j.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt


@dataclass(frozen=True)
class VSequence:
    values: tuple[int, ...]

    def __post_init__(self):
        vals = self.values
        if vals and vals[-1] == 0:
            raise ValueError("store V only up to nu+ (no trailing zeros)")
        for a, b in zip(vals, vals[1:] + (0,)):
            if a - b not in (0, 1):
                raise ValueError(f"V must drop by 0 or 1 at each step: {vals}")

    @property
    def nu_plus(self) -> int:
        return len(self.values)

    @property
    def v0(self) -> int:
        return self.at(0)

    def at(self, i: int) -> int:
        if i < 0:
            return self.at(-i) - i
        if i < len(self.values):
            return self.values[i]
        return 0


UNKNOT = VSequence(())


def _check_coprime(p, q):
    if p < 1 or q < 1 or gcd(p, q) != 1:
        raise ValueError(f"need coprime positive p, q; got ({p}, {q})")


def semigroup_count(p: int, q: int, n: int) -> int:
    """#(S ∩ [0, n)) for the semigroup S generated by p and q.

    Each element has exactly one representation h p + k q with 0 <= h < q.
    """
    _check_coprime(p, q)
    if n <= 0:
        return 0
    total = 0
    for h in range(q):
        rest = n - h * p
        if rest <= 0:
            break
        total += -(-rest // q)
    return total


def in_semigroup(p: int, q: int, x: int) -> bool:
    if x < 0:
        return False
    h = (x * pow(p, -1, q)) % q if q > 1 else 0
    return h * p <= x


def torus_v(p: int, q: int) -> VSequence:
    """V_i(T(p,q)) = #(S ∩ [0, g+i)) - i for 0 <= i < g."""
    return _torus_v(min(p, q), max(p, q))


@lru_cache(maxsize=4096)
def _torus_v(p: int, q: int) -> VSequence:
    _check_coprime(p, q)
    g = (p - 1) * (q - 1) // 2
    return VSequence(tuple(semigroup_count(p, q, g + i) - i for i in range(g)))


def torus_v_from_thresholds(p: int, q: int) -> VSequence:
    """Same sequence read off the semigroup: V_i = a exactly when
    g - s(a) <= i < g - s(a-1), s(a) being the a-th element (from 0)."""
    _check_coprime(p, q)
    g = (p - 1) * (q - 1) // 2
    elems = [x for x in range(2 * g + 1) if in_semigroup(p, q, x)]
    vals = []
    for i in range(g):
        a = 0
        while g - elems[a] > i:
            a += 1
        vals.append(a)
    while vals and vals[-1] == 0:
        vals.pop()
    return VSequence(tuple(vals))


def cable_v(base: VSequence, p: int, q: int) -> VSequence:
    """V of the (p, q)-cable of a knot with sequence ``base``.

    Up to floor(pq/2) this is the cabling formula
        V_i(T(p,q)) + max(V_{floor(f/p)}, V_{floor((p+q-1-f)/p)}),
    f = (i - (p-1)(q-1)/2) mod q.  Past that point the values are completed
    as min(V_w, nu - i) with nu = p nu+(K) + (p-1)(q-1)/2.
    """
    if p <= 1:
        raise ValueError("cable winding number must be at least 2")
    _check_coprime(p, q)
    torus = torus_v(p, q) if q > 1 else UNKNOT
    shift = (p - 1) * (q - 1) // 2
    w = p * q // 2
    window = []
    for i in range(w + 1):
        f = (i - shift) % q
        window.append(torus.at(i) + max(base.at(f // p), base.at((p + q - 1 - f) // p)))
    if base.nu_plus == 0:
        nu = next(i for i, v in enumerate(window) if v == 0)
    else:
        nu = p * base.nu_plus + shift
    if nu <= w:
        if any(v == 0 for v in window[:nu]) or any(window[nu:]):
            raise ArithmeticError("cabling window disagrees with the nu+ formula")
        return VSequence(tuple(window[:nu]))
    if 0 in window or window[w] > nu - w:
        raise ArithmeticError("cabling window cannot be completed monotonically")
    tail = [min(window[w], nu - i) for i in range(w + 1, nu)]
    return VSequence(tuple(window + tail))


def d_lens(p: int, q: int, i: int) -> Fraction:
    """Correction term of p/q surgery on the unknot in spin^c structure i,
    by the two-term recursion d(p,q,i) = -1/4 + (2i+1-p-q)^2/(4pq) - d(q, p mod q, i mod q)."""
    if p == 1:
        return Fraction(0)
    if not (p > q >= 1) or gcd(p, q) != 1:
        raise ValueError(f"need coprime p > q >= 1, got ({p}, {q})")
    if not 0 <= i < p:
        raise IndexError(f"spin^c index {i} out of range for p = {p}")
    return (Fraction(-1, 4) + Fraction((2 * i + 1 - p - q) ** 2, 4 * p * q)
            - d_lens(q, p % q, i % q))


def d_surgery(v: VSequence, n: int, i: int) -> Fraction:
    if n < 1:
        raise ValueError("surgery coefficient must be positive")
    if not 0 <= i < n:
        raise IndexError(f"spin^c index {i} out of range for n = {n}")
    return -2 * max(v.at(i), v.at(n - i)) + d_lens(n, 1, i)


@dataclass(frozen=True)
class DInvVerdict:
    n: int
    m: int | None
    labels: tuple[int, ...]
    failures: tuple[tuple[int, int, int], ...]
    label_failures: tuple[int, ...]

    @property
    def passed(self) -> bool:
        return self.m is not None and not self.failures

    @property
    def routes_agree(self) -> bool:
        return (not self.failures) == (not self.label_failures)


def vanishing_labels(m: int) -> tuple[int, ...]:
    n = m * m
    return tuple((m * (m - 1) // 2 - k * m) % n for k in range(m))


def square_surgery_test(v: VSequence, n: int) -> DInvVerdict:
    """Do the m = sqrt(n) distinguished correction terms of S^3_n(K) vanish?

    Checked twice: directly at the labels, and as the equalities
    V_{m(m-2k-1)/2} = k(k+1)/2 for 0 <= k <= m/2.
    """
    m = isqrt(n)
    if m * m != n:
        return DInvVerdict(n, None, (), (), ())
    labels = vanishing_labels(m)
    label_fail = tuple(i for i in labels if d_surgery(v, n, i) != 0)
    fails = []
    for k in range(m // 2 + 1):
        expected = k * (k + 1) // 2
        actual = v.at(m * (m - 2 * k - 1) // 2)
        if actual != expected:
            fails.append((k, expected, actual))
    verdict = DInvVerdict(n, m, labels, tuple(fails), label_fail)
    if not verdict.routes_agree:
        raise ArithmeticError(f"correction-term routes disagree at n = {n}")
    return verdict


def m_range(nu: int) -> range:
    """Integers m with (1 + sqrt(1+8nu))/2 <= m < (3 + sqrt(9+8nu))/2."""
    if nu < 0:
        raise ValueError("nu must be non-negative")
    lo = 1
    while (2 * lo - 1) ** 2 < 1 + 8 * nu:
        lo += 1
    hi = lo
    while 2 * (hi + 1) - 3 < 0 or (2 * (hi + 1) - 3) ** 2 < 9 + 8 * nu:
        hi += 1
    return range(lo, hi + 1)


@dataclass(frozen=True)
class SlopeBounds:
    """Slopes q/p allowed for a cable with a rational-ball surgery.

    With ``radicand`` set the lower bound is the closed bound
    1/(2 + sqrt(radicand)); otherwise ``lower`` is an open bound.  The upper
    bound is open; None means no upper bound applies.
    """

    lower: Fraction | None
    radicand: int | None
    upper: Fraction | None

    def contains(self, slope) -> bool:
        s = Fraction(slope)
        if self.upper is not None and not s < self.upper:
            return False
        if self.radicand is not None:
            x = 1 / s - 2
            return x <= 0 or x * x <= self.radicand
        return s > self.lower

    def lower_value(self) -> float:
        if self.radicand is not None:
            return 1 / (2 + self.radicand ** 0.5)
        return float(self.lower)


def slope_bounds(nu: int, v0: int, q_equals_one: bool) -> SlopeBounds:
    if nu <= 0:
        raise ValueError("slope bounds need nu+ > 0")
    if not nu >= v0 >= 1:
        raise ValueError("need nu >= V0 >= 1")
    if q_equals_one:
        return SlopeBounds(None, 1 + 8 * v0, None)
    return SlopeBounds(Fraction(1, 9 * v0), None, Fraction(20 * nu))
