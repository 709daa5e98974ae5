"""Bit-packed dense linear algebra over GF(2).

Rows are packed little-endian into uint64 words: column ``c`` lives in word
``c >> 6`` at bit ``c & 63``.
"""

from __future__ import annotations

import numba
import numpy as np


def pack_rows(n_cols: int, rows: np.ndarray, cols: np.ndarray, n_rows: int) -> np.ndarray:
    """Pack the coordinate list (rows[i], cols[i]) into an (n_rows, W) array."""
    words = (n_cols + 63) >> 6
    out = np.zeros((n_rows, max(words, 1)), dtype=np.uint64)
    rows = np.asarray(rows, dtype=np.int64)
    cols = np.asarray(cols, dtype=np.int64)
    np.bitwise_or.at(out, (rows, cols >> 6),
                      np.left_shift(np.uint64(1), (cols & 63).astype(np.uint64)))
    return out


def pack_dense(a: np.ndarray) -> np.ndarray:
    a = np.asarray(a, dtype=bool)
    r, c = np.nonzero(a)
    return pack_rows(a.shape[1], r, c, a.shape[0])


def unpack(words: np.ndarray, n_cols: int) -> np.ndarray:
    """Inverse of :func:`pack_dense`; returns a uint8 matrix."""
    words = np.ascontiguousarray(words, dtype=np.uint64)
    as_bytes = words.view(np.uint8).reshape(words.shape[0], -1)
    bits = np.unpackbits(as_bytes, axis=1, bitorder="little")
    return bits[:, :n_cols]


@numba.njit(cache=True)
def _eliminate(a, n_pivot_cols, reduced):
    m, w_total = a.shape
    pivots = np.empty(min(m, n_pivot_cols), dtype=np.int64)
    r = 0
    for col in range(n_pivot_cols):
        if r == m:
            break
        w = col >> 6
        bit = np.uint64(1) << np.uint64(col & 63)
        piv = -1
        for i in range(r, m):
            if a[i, w] & bit:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for t in range(w, w_total):
                tmp = a[r, t]
                a[r, t] = a[piv, t]
                a[piv, t] = tmp
        start = 0 if reduced else r + 1
        for i in range(start, m):
            if i != r and (a[i, w] & bit):
                for t in range(w, w_total):
                    a[i, t] ^= a[r, t]
        pivots[r] = col
        r += 1
    return pivots[:r]


def echelon(a: np.ndarray, n_pivot_cols: int | None = None, reduced: bool = False) -> np.ndarray:
    """In-place Gaussian elimination; returns the pivot columns in order.

    Only the first ``n_pivot_cols`` columns are eligible as pivots, the rest
    are carried along (useful for augmented systems).
    """
    if n_pivot_cols is None:
        n_pivot_cols = a.shape[1] * 64
    return _eliminate(a, n_pivot_cols, reduced)


def rank_packed(a: np.ndarray, n_cols: int) -> int:
    return len(echelon(a.copy(), n_cols))


def rank_dense(a: np.ndarray) -> int:
    a = np.asarray(a)
    return rank_packed(pack_dense(a), a.shape[1])


def get_bit(a: np.ndarray, row: int, col: int) -> int:
    return int((int(a[row, col >> 6]) >> (col & 63)) & 1)


def column_bits(a: np.ndarray, col: int) -> np.ndarray:
    return ((a[:, col >> 6] >> np.uint64(col & 63)) & np.uint64(1)).astype(np.uint8)


@numba.njit(cache=True)
def reduce_by(vecs, basis, pivots, start, stop):
    """Reduce every row of ``vecs`` in place by basis rows start..stop-1.

    Basis row i has its leading bit at column pivots[i] and zeros at the
    pivots of all earlier rows, so one pass in order suffices.
    """
    n, w_total = vecs.shape
    for i in range(start, stop):
        col = pivots[i]
        w = col >> 6
        bit = np.uint64(1) << np.uint64(col & 63)
        for r in range(n):
            if vecs[r, w] & bit:
                for t in range(w_total):
                    vecs[r, t] ^= basis[i, t]
