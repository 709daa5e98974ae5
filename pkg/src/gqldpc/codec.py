"""BPSK over the AWGN channel and sum-product decoding."""

from __future__ import annotations

from dataclasses import dataclass

import numba
import numpy as np

from .qc import SparseBinaryMatrix

CLAMP = 30.0


def noise_variance(ebn0_db: float, rate: float) -> float:
    if not 0.0 < rate < 1.0:
        raise ValueError("rate must lie in (0, 1)")
    return 1.0 / (2.0 * rate * 10.0 ** (ebn0_db / 10.0))


def awgn_llr(codeword, ebn0_db: float, rate: float, rng_seed=None) -> np.ndarray:
    """Channel LLRs for BPSK (0 -> +1, 1 -> -1); positive favours bit 0.

    ``rng_seed`` may be an int, a SeedSequence or a numpy Generator.
    """
    rng = rng_seed if isinstance(rng_seed, np.random.Generator) else np.random.default_rng(rng_seed)
    sigma2 = noise_variance(ebn0_db, rate)
    x = 1.0 - 2.0 * np.asarray(codeword, dtype=np.float64)
    y = x + rng.normal(0.0, np.sqrt(sigma2), size=x.shape)
    return 2.0 * y / sigma2


@dataclass
class DecodeResult:
    bits: np.ndarray
    converged: bool
    iterations_used: int


@numba.njit(cache=True)
def _spa_kernel(llr, row_ptr, edge_col, col_ptr, col_edges, max_iters, clamp,
                bits, converged, iters):
    frames, n = llr.shape
    m = row_ptr.size - 1
    n_edges = edge_col.size
    v2c = np.empty(n_edges)
    c2v = np.empty(n_edges)
    t = np.empty(n_edges)
    post = np.empty(n)
    fwd = np.empty(n_edges + 1)
    for f in range(frames):
        ch = np.empty(n)
        for j in range(n):
            ch[j] = min(max(llr[f, j], -clamp), clamp)
        for e in range(n_edges):
            v2c[e] = ch[edge_col[e]]
        iters[f] = max_iters
        converged[f] = False
        for it in range(1, max_iters + 1):
            # check nodes: product of tanh(v/2) over the other edges of the row
            for r in range(m):
                lo, hi = row_ptr[r], row_ptr[r + 1]
                for e in range(lo, hi):
                    v = v2c[e]
                    t[e] = np.tanh(0.5 * v) if v >= 0 else -np.tanh(-0.5 * v)
                acc = 1.0
                for e in range(lo, hi):
                    fwd[e] = acc
                    acc *= t[e]
                acc = 1.0
                for e in range(hi - 1, lo - 1, -1):
                    prod = fwd[e] * acc
                    acc *= t[e]
                    a = min(abs(prod), 1.0 - 1e-15)
                    val = min(2.0 * np.arctanh(a), clamp)
                    c2v[e] = val if prod >= 0 else -val
            # variable nodes
            for j in range(n):
                s = ch[j]
                for k in range(col_ptr[j], col_ptr[j + 1]):
                    s += c2v[col_edges[k]]
                post[j] = s
            erased = False
            for j in range(n):
                if post[j] < 0:
                    bits[f, j] = 1
                else:
                    bits[f, j] = 0
                    if post[j] == 0:
                        erased = True
            ok = not erased
            if ok:
                for r in range(m):
                    par = 0
                    for e in range(row_ptr[r], row_ptr[r + 1]):
                        par ^= bits[f, edge_col[e]]
                    if par:
                        ok = False
                        break
            if ok:
                converged[f] = True
                iters[f] = it
                break
            for e in range(n_edges):
                v = post[edge_col[e]] - c2v[e]
                v2c[e] = min(max(v, -clamp), clamp)


class SpaDecoder:
    """Flooding log-domain SPA with the tanh rule; reusable for one H.

    Messages are clamped to +-``clamp``.  A posterior of exactly zero is an
    erasure: its hard bit is 0 but the frame does not count as converged.
    The syndrome is checked after every iteration and decoding stops at
    the first codeword.
    """

    def __init__(self, h: SparseBinaryMatrix, clamp: float = CLAMP):
        self.h = h
        self.clamp = float(clamp)
        self.n = h.n_cols
        self.row_ptr = np.ascontiguousarray(h.row_ptr, dtype=np.int64)
        self.edge_col = np.ascontiguousarray(h.row_idx, dtype=np.int64)
        self.col_ptr = np.ascontiguousarray(h.col_ptr, dtype=np.int64)
        self.col_edges = np.ascontiguousarray(np.argsort(self.edge_col, kind="stable"), dtype=np.int64)

    def decode_batch(self, llr: np.ndarray, max_iters: int):
        """Decode a (frames, n) batch; returns (bits, converged, iterations)."""
        if max_iters < 1:
            raise ValueError("max_iters must be at least 1")
        llr = np.ascontiguousarray(np.atleast_2d(np.asarray(llr, dtype=np.float64)))
        if llr.shape[1] != self.n:
            raise ValueError(f"expected {self.n} LLRs per frame, got {llr.shape[1]}")
        frames = llr.shape[0]
        bits = np.zeros((frames, self.n), dtype=np.uint8)
        converged = np.zeros(frames, dtype=np.bool_)
        iters = np.zeros(frames, dtype=np.int64)
        _spa_kernel(llr, self.row_ptr, self.edge_col, self.col_ptr, self.col_edges,
                    int(max_iters), self.clamp, bits, converged, iters)
        return bits, converged, iters

    def decode(self, llr, max_iters: int) -> DecodeResult:
        bits, conv, iters = self.decode_batch(llr, max_iters)
        return DecodeResult(bits[0], bool(conv[0]), int(iters[0]))


def spa_decode(h: SparseBinaryMatrix, llr, max_iters: int = 25) -> DecodeResult:
    return SpaDecoder(h).decode(llr, max_iters)
