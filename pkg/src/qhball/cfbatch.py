"""Vectorised versions of the cfrac operations for exhaustive sweeps.

Strings are rows of a 2-D integer array padded with zeros on the right.
The caller picks the dtype; numerators and the products a*num must fit it.
For entries <= 9 and length <= 8 every numerator is below 9**8, so int32
is enough, and a string and its dual share the same numerator.
"""
from __future__ import annotations

import numpy as np


def all_strings(lo: int, hi: int, length: int, prefix: tuple[int, ...] = (),
                dtype=np.int64) -> np.ndarray:
    """Every string of the given length with entries in [lo, hi], as rows.

    Only rows starting with ``prefix`` are produced (used for chunking).
    """
    span = np.arange(lo, hi + 1, dtype=dtype)
    cols = [np.array([prefix[j]], dtype=dtype) if j < len(prefix) else span
            for j in range(length)]
    grids = np.meshgrid(*cols, indexing="ij")
    return np.stack([g.ravel() for g in grids], axis=1)


def chunks(lo: int, hi: int, length: int, max_rows: int = 1 << 16, dtype=np.int64):
    """All strings of one length, split by prefix into blocks of <= max_rows."""
    k = 0
    while k < length and (hi - lo + 1) ** (length - k) > max_rows:
        k += 1
    for prefix in np.ndindex(*([hi - lo + 1] * k)):
        yield all_strings(lo, hi, length, tuple(lo + i for i in prefix), dtype)


def evaluate(arr: np.ndarray, lengths: np.ndarray | None = None):
    """Numerators and denominators of the rows (zero padding is skipped)."""
    rows = arr.shape[0]
    num = np.ones(rows, dtype=arr.dtype)
    den = np.zeros(rows, dtype=arr.dtype)
    for j in range(arr.shape[1] - 1, -1, -1):
        a = arr[:, j]
        live = a > 0
        if live.all():
            num, den = a * num - den, num
        else:
            new_num = a * num - den
            num, den = np.where(live, new_num, num), np.where(live, num, den)
    return num, den


def expand(num: np.ndarray, den: np.ndarray, width: int):
    """Expansion of each num/den (> 1) into a zero-padded array and lengths."""
    rows = num.shape[0]
    out = np.zeros((rows, width), dtype=num.dtype)
    lengths = np.zeros(rows, dtype=np.int64)
    idx = np.arange(rows)
    x, y = num.copy(), den.copy()
    col = 0
    while idx.size:
        if col >= width:
            raise ValueError("expansion wider than the requested width")
        a = -(-x // y)
        out[idx, col] = a
        lengths[idx] += 1
        x, y = y, a * y - x
        keep = y != 0
        idx, x, y = idx[keep], x[keep], y[keep]
        col += 1
    return out, lengths


def dual(arr: np.ndarray, values=None):
    """Arithmetic complement x/y -> x/(x-y); returns (array, lengths).

    ``values`` may carry the already computed evaluate(arr).
    """
    num, den = evaluate(arr) if values is None else values
    # a string of length L with J = sum(a - 1) has a dual of length J - L + 1
    width = int(np.where(arr > 0, arr - 2, 0).sum(axis=1).max()) + 1
    return expand(num, num - den, width)


def dual_by_diagram(arr: np.ndarray, lengths: np.ndarray):
    """Dual via the dot diagram: entry x of the dual is 1 + (dots in column x).

    Row j covers columns s_j .. s_j + a_j - 2 and the next row starts on the
    column where row j ends, so column x holds one dot per row covering it,
    i.e. 1 + (number of rows j >= 2 starting at x).
    """
    rows, cols = arr.shape
    step = np.where(arr > 0, arr - 2, 0)
    starts = np.cumsum(step, axis=1)  # starts[:, j] is where row j+1 begins
    ncols = starts[:, -1] + 1
    width = int(ncols.max())
    r = np.repeat(np.arange(rows), cols - 1).reshape(rows, cols - 1)
    inner = np.arange(1, cols)[None, :] < lengths[:, None]
    flat = (r * width + starts[:, :-1])[inner]
    counts = np.bincount(flat, minlength=rows * width).reshape(rows, width)
    mask = np.arange(width)[None, :] < ncols[:, None]
    return np.where(mask, counts + 2, 0).astype(arr.dtype), ncols


def stats(arr: np.ndarray):
    """(I, J) per row."""
    live = arr > 0
    i_val = np.where(live, arr - 3, 0).sum(axis=1)
    j_val = np.where(live, arr - 1, 0).sum(axis=1)
    return i_val, j_val


def same_rows(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Row-wise equality of two zero-padded arrays of possibly different widths."""
    if a.shape[1] < b.shape[1]:
        a, b = b, a
    w = b.shape[1]
    return (a[:, :w] == b).all(axis=1) & (a[:, w:] == 0).all(axis=1)
