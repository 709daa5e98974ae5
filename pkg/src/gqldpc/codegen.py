"""Quasi-cyclic generator matrices G = (P | id) and the SRAA encoder.

The parity part is a set of block columns ``Par`` whose columns of H span
the whole column space of H.  For every other (systematic) block column j
the first column h_(j,0) of H is written as H_Par p_j; the quasi-cyclic
symmetry of H then makes the cyclic shifts of p_j solve the equations for
h_(j,u), so the rows of P^rep are the p_j cut into length-b first rows of
circulants.

When every block column is needed for the parity part (kb = 0) the code is
instead presented by a single quasi-cyclic generator row g: the codewords
are m(x) g(x) with deg m < k.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import gf2
from .qc import QcBlockMatrix, SparseBinaryMatrix, expand

SYSTEMATIC = "systematic"
CYCLIC = "cyclic"


class NoUnitPivot(ValueError):
    pass


class EmptyCode(ValueError):
    pass


class DimensionMismatch(ValueError):
    pass


class LengthMismatch(ValueError):
    pass


@dataclass
class PrepMatrix:
    """Generator data.

    ``rows`` has shape (kb, cb, b): rows[j, t] is the first row of the
    circulant of P^rep at (j, t).  ``layout`` lists, for every block of the
    codeword in G order, the native block column of H it occupies: the
    parity blocks come first, then the systematic ones.

    In the cyclic form kb = 1, cb = n/b, ``rows[0]`` is the generator g in
    native block order and ``k`` (< b) message bits are used.
    """

    b: int
    kb: int
    cb: int
    rows: np.ndarray
    layout: tuple[int, ...]
    form: str = SYSTEMATIC
    k: int = 0

    def __post_init__(self):
        self.rows = np.asarray(self.rows, dtype=np.uint8).reshape(self.kb, self.cb, self.b)
        self.layout = tuple(int(x) for x in self.layout)
        if self.form == SYSTEMATIC:
            self.k = self.kb * self.b
            if len(self.layout) != self.kb + self.cb:
                raise DimensionMismatch("layout does not cover every block")
        elif len(self.layout) != self.cb:
            raise DimensionMismatch("layout does not cover every block")

    @property
    def n(self) -> int:
        return len(self.layout) * self.b

    @property
    def parity_blocks(self) -> tuple[int, ...]:
        return self.layout[:self.cb] if self.form == SYSTEMATIC else ()

    @property
    def systematic_blocks(self) -> tuple[int, ...]:
        return self.layout[self.cb:] if self.form == SYSTEMATIC else ()

    def native_columns(self) -> np.ndarray:
        """Native column index of every position of a G-ordered codeword."""
        u = np.arange(self.b)
        return (np.asarray(self.layout)[:, None] * self.b + u[None, :]).ravel()

    def to_native(self, codewords: np.ndarray) -> np.ndarray:
        codewords = np.asarray(codewords)
        out = np.empty_like(codewords)
        out[..., self.native_columns()] = codewords
        return out

    def generator(self) -> np.ndarray:
        """Dense k x n generator in G order (systematic) or native order (cyclic)."""
        b = self.b
        u = np.arange(b)
        if self.form == CYCLIC:
            g = self.rows[0]
            return np.stack([np.roll(g, s, axis=1).ravel() for s in range(self.k)])
        out = np.zeros((self.k, self.n), dtype=np.uint8)
        for j in range(self.kb):
            for t in range(self.cb):
                circ = self.rows[j, t][(u[None, :] - u[:, None]) % b]
                out[j * b:(j + 1) * b, t * b:(t + 1) * b] = circ
            col = (self.cb + j) * b
            out[j * b + u, col + u] = 1
        return out

    def __eq__(self, other):
        if not isinstance(other, PrepMatrix):
            return NotImplemented
        return (self.b, self.kb, self.cb, self.layout, self.form, self.k) == (
            other.b, other.kb, other.cb, other.layout, other.form, other.k
        ) and np.array_equal(self.rows, other.rows)


@dataclass
class GeneratorReport:
    n: int
    b: int
    rank: int
    dim_C: int
    dim_Cprime: int
    parity_blocks: list[int]
    form: str = SYSTEMATIC
    attempts: int = 1
    notes: list[str] = field(default_factory=list)

    @property
    def rate_C(self) -> float:
        return self.dim_C / self.n

    @property
    def rate_Cprime(self) -> float:
        return self.dim_Cprime / self.n

    @property
    def gap(self) -> int:
        return self.dim_C - self.dim_Cprime


# -- parity block selection --------------------------------------------------

def _column_reorder(m: SparseBinaryMatrix, blocks: list[int], b: int) -> np.ndarray:
    """Packed rows of H restricted to ``blocks`` (in that order)."""
    rows, cols = m.coords()
    pos = np.full(m.n_cols // b, -1, dtype=np.int64)
    pos[np.asarray(blocks, dtype=np.int64)] = np.arange(len(blocks))
    bc = cols // b
    keep = pos[bc] >= 0
    newc = pos[bc[keep]] * b + cols[keep] % b
    return gf2.pack_rows(len(blocks) * b, rows[keep], newc, m.n_rows)


def greedy_parity_blocks(m: SparseBinaryMatrix, b: int, order: list[int]) -> tuple[list[int], int]:
    """Blocks (in ``order``) that contain a pivot column, and the rank."""
    packed = _column_reorder(m, order, b)
    piv = gf2.echelon(packed, len(order) * b)
    used = sorted({order[int(p) // b] for p in piv})
    return used, int(piv.size)


def _solve_parity(m: SparseBinaryMatrix, b: int, par: list[int], sys: list[int]) -> np.ndarray:
    """p_j with H_par p_j = h_(j,0) for every systematic block j; shape (kb, cb*b)."""
    width = len(par) * b
    packed = _column_reorder(m, par + sys, b)
    # keep only the first column of every systematic block as the right-hand side
    bits = gf2.unpack(packed, (len(par) + len(sys)) * b)
    rhs = bits[:, width::b]
    aug = gf2.pack_dense(np.concatenate([bits[:, :width], rhs], axis=1))
    piv = gf2.echelon(aug, width, reduced=True)
    full = gf2.unpack(aug, width + len(sys))
    if np.any(full[piv.size:, width:]):
        raise AssertionError("parity blocks do not span the column space")  # pragma: no cover
    sol = np.zeros((len(sys), width), dtype=np.uint8)
    sol[:, piv] = full[:piv.size, width:].T
    return sol


def max_gain_parity_blocks(m: SparseBinaryMatrix, b: int, order: list[int]) -> tuple[list[int], int]:
    """Grow the parity set one block at a time, always taking the block that
    raises the rank of H_Par the most (ties broken by ``order``).

    Columns of H are kept as packed vectors and reduced incrementally
    against an echelon basis of the span chosen so far.
    """
    cols = m.transpose().packed()
    n_words = cols.shape[1]
    basis = np.zeros((min(m.n_rows, m.n_cols) + 1, n_words), dtype=np.uint64)
    pivots = np.zeros(basis.shape[0], dtype=np.int64)
    size = 0
    chosen: list[int] = []
    remaining = list(order)
    while remaining:
        gains = []
        for u in remaining:
            blk = cols[u * b:(u + 1) * b].copy()
            gains.append(int(gf2.echelon(blk, m.n_rows).size))
        best = int(np.argmax(gains))
        if gains[best] == 0:
            break
        u = remaining.pop(best)
        chosen.append(u)
        blk = cols[u * b:(u + 1) * b].copy()
        piv = gf2.echelon(blk, m.n_rows)
        new = piv.size
        basis[size:size + new] = blk[:new]
        pivots[size:size + new] = piv
        # keep the rows free of earlier pivots (echelon rows already are of later ones)
        for r in remaining:
            gf2.reduce_by(cols[r * b:(r + 1) * b], basis, pivots, size, size + new)
        size += new
    return sorted(chosen), size


def _orders(n_blocks: int):
    """Right-to-left block order followed by its cyclic rotations."""
    base = list(range(n_blocks - 1, -1, -1))
    for r in range(n_blocks):
        yield base[r:] + base[:r]


# -- cyclic fallback -----------------------------------------------------------

def _kernel_basis(m: SparseBinaryMatrix) -> np.ndarray:
    packed = m.packed()
    piv = gf2.echelon(packed, m.n_cols, reduced=True)
    red = gf2.unpack(packed[:piv.size], m.n_cols)
    free = np.setdiff1d(np.arange(m.n_cols), piv)
    basis = np.zeros((free.size, m.n_cols), dtype=np.uint8)
    basis[np.arange(free.size), free] = 1
    basis[:, piv] = red[:, free].T
    return basis


def _shift_rank(v: np.ndarray, b: int) -> int:
    blocks = v.reshape(-1, b)
    shifts = np.stack([np.roll(blocks, s, axis=1).ravel() for s in range(b)])
    return gf2.rank_dense(shifts)


def _cyclic_generator(m: SparseBinaryMatrix, b: int, dim: int, seed: int = 0) -> np.ndarray | None:
    basis = _kernel_basis(m)
    for v in basis:
        if _shift_rank(v, b) == dim:
            return v
    rng = np.random.default_rng(seed)
    for _ in range(64):
        mix = rng.integers(0, 2, basis.shape[0], dtype=np.uint8)
        v = (mix.astype(np.int64) @ basis % 2).astype(np.uint8)
        if v.any() and _shift_rank(v, b) == dim:
            return v
    return None


# -- main entry ------------------------------------------------------------------

def derive_generator(h: QcBlockMatrix, allow_cyclic: bool = True,
                     rank: int | None = None) -> tuple[PrepMatrix, GeneratorReport]:
    """Quasi-cyclic generator for the largest implementable subcode C'.

    Parity blocks are chosen by largest rank gain, ties broken along the
    right-to-left block order; if that needs more than ceil(rank/b) blocks
    the cyclic rotations of the tie-break order are tried and the best kept.
    """
    if not h.cells:
        raise EmptyCode("zero check matrix")
    b, n_blocks = h.b, h.cols
    m = expand(h)
    n = m.n_cols
    target = None
    best = None
    attempts = 0
    for order in _orders(n_blocks):
        attempts += 1
        par, r = max_gain_parity_blocks(m, b, order)
        if rank is not None and r != rank:
            raise AssertionError("rank disagrees with the supplied value")  # pragma: no cover
        target = math.ceil(r / b)
        if best is None or len(par) < len(best[0]):
            best = (par, r)
        if len(par) == target:
            break
    par, r = best
    dim_c = n - r
    if dim_c == 0:
        raise EmptyCode("H has full column rank")
    notes = []
    if len(par) > target:
        notes.append(f"best parity set has {len(par)} blocks, bound is {target}")
    sys = [j for j in range(n_blocks) if j not in set(par)]
    if not sys:
        if not allow_cyclic:
            raise NoUnitPivot("no systematic block column remains")
        g = _cyclic_generator(m, b, dim_c)
        if g is None:
            raise NoUnitPivot("no single quasi-cyclic generator spans the code")
        prep = PrepMatrix(b, 1, n_blocks, g.reshape(1, n_blocks, b), tuple(range(n_blocks)),
                          CYCLIC, dim_c)
        rep = GeneratorReport(n, b, r, dim_c, dim_c, par, CYCLIC, attempts, notes)
        return prep, rep
    sol = _solve_parity(m, b, par, sys)
    rows = sol.reshape(len(sys), len(par), b)
    prep = PrepMatrix(b, len(sys), len(par), rows, tuple(par) + tuple(sys))
    rep = GeneratorReport(n, b, r, dim_c, len(sys) * b, par, SYSTEMATIC, attempts, notes)
    return prep, rep


# -- verification ------------------------------------------------------------

def _native_generator_blocks(p: PrepMatrix) -> list[dict[int, np.ndarray]]:
    """For each generator row block, native block column -> first row."""
    out = []
    b = p.b
    for j in range(p.kb):
        row = {}
        if p.form == SYSTEMATIC:
            for t, col in enumerate(p.parity_blocks):
                row[col] = p.rows[j, t]
            ident = np.zeros(b, dtype=np.uint8)
            ident[0] = 1
            row[p.systematic_blocks[j]] = ident
        else:
            for t in range(p.cb):
                row[t] = p.rows[0, t]
        out.append(row)
    return out


def verify_orthogonality(h: QcBlockMatrix, p: PrepMatrix) -> bool:
    """Exact check of H G^T = 0 in the circulant ring.

    Block (r, j) of H G^T is sum_t H_(r,t)(x) G_(j,t)(x^-1); each product is
    a sum of cyclic rotations of the reversed first row of G_(j,t).
    """
    if h.b != p.b or h.cols * h.b != p.n:
        raise DimensionMismatch(f"H is {h.shape}, generator has n={p.n}, b={p.b}")
    b = p.b
    rev = (-np.arange(b)) % b
    g_rows = _native_generator_blocks(p)
    for j, row in enumerate(g_rows):
        reversed_rows = {t: v[rev] for t, v in row.items()}
        acc = np.zeros((h.rows, b), dtype=np.uint8)
        for (r, t), shifts in h.cells.items():
            v = reversed_rows.get(t)
            if v is None:
                continue
            for s in shifts:
                acc[r] ^= np.roll(v, s)
        if acc.any():
            return False
    if p.form == CYCLIC:
        # the message length must not exceed dim R g
        return _shift_rank(p.rows[0].ravel(), b) >= p.k
    return True


# -- encoding ----------------------------------------------------------------

def _check_message(p: PrepMatrix, messages: np.ndarray) -> np.ndarray:
    messages = np.asarray(messages, dtype=np.uint8)
    if messages.shape[-1] != p.k:
        raise LengthMismatch(f"message length {messages.shape[-1]}, expected {p.k}")
    return messages


def sraa_parity(p: PrepMatrix, messages: np.ndarray) -> np.ndarray:
    """Shift-register-adder-accumulator emulation, bit-sliced over frames.

    One register per parity block is loaded with the first row of
    P^rep[j, t] at the start of message block j and rotated right by one
    after every clock; a message bit of 1 adds the register into the
    accumulator.  After k clocks the accumulators hold the parity bits.
    Returns the accumulated (frames, cb*b) bits.
    """
    messages = _check_message(p, messages)
    single = messages.ndim == 1
    msg = np.atleast_2d(messages)
    frames = msg.shape[0]
    words = (frames + 63) >> 6
    # bit f of word w of sliced[i] is message bit i of frame 64*w + f
    padded = np.zeros((words * 64, p.k), dtype=np.uint8)
    padded[:frames] = msg
    sliced = np.packbits(padded.T.reshape(p.k, words, 64), axis=2, bitorder="little")
    sliced = np.ascontiguousarray(sliced).view(np.uint64).reshape(p.k, words)
    acc = np.zeros((p.cb, p.b, words), dtype=np.uint64)
    full = np.uint64(0xFFFFFFFFFFFFFFFF)
    for clock in range(p.k):
        j, u = divmod(clock, p.b)
        if u == 0:
            reg = p.rows[j % p.kb].astype(np.uint64) * full
        word = sliced[clock]
        if word.any():
            acc ^= reg[:, :, None] & word[None, None, :]
        reg = np.roll(reg, 1, axis=1)
    acc = acc.reshape(p.cb * p.b, words)
    bits = np.unpackbits(acc.view(np.uint8).reshape(p.cb * p.b, words * 8), axis=1,
                         bitorder="little")[:, :frames].T
    return bits[0] if single else bits


def encode(p: PrepMatrix, message: np.ndarray) -> np.ndarray:
    """Codeword (message P | message) in G order via the SRAA circuit.

    For the cyclic form the output is sum_{u<k} m_u x^u g in native order.
    Accepts a single message or a (frames, k) batch.
    """
    message = _check_message(p, message)
    parity = sraa_parity(p, message)
    if p.form == CYCLIC:
        return parity
    return np.concatenate([parity, message], axis=-1)


def generator_packed(p: PrepMatrix) -> np.ndarray:
    """Bit-packed rows of the non-identity part of G: the parity part
    (k x cb*b) in systematic form, the whole generator in cyclic form."""
    b = p.b
    u = np.arange(b)
    if p.form == CYCLIC:
        g = p.rows[0]
        return gf2.pack_dense(np.stack([np.roll(g, s, axis=1).ravel() for s in range(p.k)]))
    width = p.cb * b
    out = np.zeros((p.k, max((width + 63) >> 6, 1)), dtype=np.uint64)
    shift = (u[None, :] - u[:, None]) % b
    for j in range(p.kb):
        block = np.concatenate([p.rows[j, t][shift] for t in range(p.cb)], axis=1)
        out[j * b:(j + 1) * b] = gf2.pack_dense(block)
    return out


def encode_matrix(p: PrepMatrix, message: np.ndarray, packed: np.ndarray | None = None) -> np.ndarray:
    """Independent route: XOR of the generator rows selected by the message."""
    message = _check_message(p, message)
    if packed is None:
        packed = generator_packed(p)
    msg = np.atleast_2d(message).astype(bool)
    width = p.n if p.form == CYCLIC else p.cb * p.b
    acc = np.zeros((msg.shape[0], packed.shape[1]), dtype=np.uint64)
    for f in range(msg.shape[0]):
        if msg[f].any():
            acc[f] = np.bitwise_xor.reduce(packed[msg[f]], axis=0)
    parity = gf2.unpack(acc, width)
    out = parity if p.form == CYCLIC else np.concatenate([parity, msg.astype(np.uint8)], axis=1)
    return out.reshape(message.shape[:-1] + (out.shape[-1],))


def encode_native(p: PrepMatrix, message: np.ndarray) -> np.ndarray:
    """Codeword in the column order of H."""
    cw = encode(p, message)
    return cw if p.form == CYCLIC else p.to_native(cw)
