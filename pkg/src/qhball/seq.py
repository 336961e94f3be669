"""Fibonacci and the three Pell-type sequences R, S, T.

R, S and T all satisfy X(k+1) = 6 X(k) - X(k-1) and differ only in their
starting values.  Values are Python ints, so nothing ever overflows.
"""
from __future__ import annotations

import enum
import threading


class SeqKind(enum.Enum):
    FIB = "F"
    R = "R"
    S = "S"
    T = "T"


_START = {
    SeqKind.FIB: (0, 1),
    SeqKind.R: (1, 3),
    SeqKind.S: (1, 1),
    SeqKind.T: (0, 1),
}

# append-only memo tables; growth happens under the lock, reads are plain
# list indexing of already-published entries
_memo = {kind: list(start) for kind, start in _START.items()}
_lock = threading.Lock()


def _step(kind, a, b):
    if kind is SeqKind.FIB:
        return a + b
    return 6 * b - a


def _term(kind: SeqKind, n: int) -> int:
    table = _memo[kind]
    if n < len(table):
        return table[n]
    with _lock:
        while len(table) <= n:
            table.append(_step(kind, table[-2], table[-1]))
    return table[n]


def fibonacci(n: int) -> int:
    """F(n) with F(0) = 0, F(1) = 1 and the convention F(-1) = 1."""
    if n == -1:
        return 1
    if n < 0:
        raise ValueError(f"fibonacci index must be >= -1, got {n}")
    return _term(SeqKind.FIB, n)


def pell(kind: SeqKind | str, n: int) -> int:
    """n-th term of R (1, 3, 17, ...), S (1, 1, 5, ...) or T (0, 1, 6, ...)."""
    kind = SeqKind(kind) if isinstance(kind, str) else kind
    if kind is SeqKind.FIB:
        raise ValueError("use fibonacci() for the Fibonacci sequence")
    if n < 0:
        raise ValueError(f"index must be non-negative, got {n}")
    return _term(kind, n)


def term(kind: SeqKind | str, n: int) -> int:
    kind = SeqKind(kind) if isinstance(kind, str) else kind
    if kind is SeqKind.FIB:
        return fibonacci(n)
    return pell(kind, n)


def index_of(kind: SeqKind | str, value: int, start: int = 0) -> int | None:
    """Smallest n >= start with term(kind, n) == value, or None.

    Every sequence is strictly increasing from index 2 on, so the scan stops
    as soon as the terms pass ``value``.
    """
    n = start
    while True:
        x = term(kind, n)
        if x == value:
            return n
        if x > value and n >= 2:
            return None
        n += 1
