"""Quasi-cyclic block matrices, the circulant ring F_2[x]/(x^b - 1),
expansion to sparse binary form, GF(2) rank and Tanner-graph metrics.

Convention: the cell (r, c) holding shift set S expands to the b x b block
whose row u has ones at columns (u + s) mod b for s in S.  With this
convention the block of S is the circulant of the polynomial sum x^s, block
products are ring products, and transposition negates every shift.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import gf2


class NotAUnit(ArithmeticError):
    pass


class MatrixTooLarge(ValueError):
    pass


# -- GF(2)[x] on Python ints (bit i = coefficient of x^i) -----------------

def clmul(a: int, b: int) -> int:
    if a.bit_count() > b.bit_count():
        a, b = b, a
    out = 0
    while a:
        low = a & -a
        out ^= b << (low.bit_length() - 1)
        a ^= low
    return out


def poly_divmod(a: int, b: int) -> tuple[int, int]:
    if b == 0:
        raise ZeroDivisionError("division by the zero polynomial")
    quo = 0
    db = b.bit_length()
    while a.bit_length() >= db:
        shift = a.bit_length() - db
        quo ^= 1 << shift
        a ^= b << shift
    return quo, a


def poly_gcd(a: int, b: int) -> int:
    while b:
        a, b = b, poly_divmod(a, b)[1]
    return a


def poly_xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, s, t) with s*a + t*b = g = gcd(a, b)."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        quo, rem = poly_divmod(a, b)
        a, b = b, rem
        s0, s1 = s1, s0 ^ clmul(quo, s1)
        t0, t1 = t1, t0 ^ clmul(quo, t1)
    return a, s0, t0


def _fold(a: int, b: int) -> int:
    """Reduce modulo x^b - 1."""
    mask = (1 << b) - 1
    while a >> b:
        a = (a & mask) ^ (a >> b)
    return a


# -- the circulant ring ------------------------------------------------------

@dataclass(frozen=True)
class CirculantPoly:
    """Element of F_2[x]/(x^b - 1) given by its support {s : coeff of x^s = 1}."""

    b: int
    support: tuple[int, ...] = ()

    def __post_init__(self):
        sup = tuple(sorted(set(int(s) for s in self.support)))
        if sup and (sup[0] < 0 or sup[-1] >= self.b):
            raise ValueError(f"support outside [0, {self.b})")
        object.__setattr__(self, "support", sup)

    @classmethod
    def from_bits(cls, b: int, bits: int) -> CirculantPoly:
        bits = _fold(bits, b)
        return cls(b, tuple(i for i in range(bits.bit_length()) if bits >> i & 1))

    @property
    def bits(self) -> int:
        out = 0
        for s in self.support:
            out |= 1 << s
        return out

    def row(self) -> np.ndarray:
        """First row of the circulant as a length-b 0/1 vector."""
        v = np.zeros(self.b, dtype=np.uint8)
        v[list(self.support)] = 1
        return v

    def __add__(self, other):
        return circ_add(self, other)

    def __mul__(self, other):
        return circ_mul(self, other)


def _same_ring(p: CirculantPoly, q: CirculantPoly) -> int:
    if p.b != q.b:
        raise ValueError(f"block sizes differ: {p.b} vs {q.b}")
    return p.b


def circ_add(p: CirculantPoly, q: CirculantPoly) -> CirculantPoly:
    b = _same_ring(p, q)
    return CirculantPoly.from_bits(b, p.bits ^ q.bits)


def circ_mul(p: CirculantPoly, q: CirculantPoly) -> CirculantPoly:
    b = _same_ring(p, q)
    return CirculantPoly.from_bits(b, clmul(p.bits, q.bits))


def _modulus(b: int) -> int:
    return (1 << b) | 1


def circ_is_unit(p: CirculantPoly) -> bool:
    if p.b == 1:
        return bool(p.support)
    return poly_gcd(_modulus(p.b), p.bits) == 1


def circ_inv(p: CirculantPoly) -> CirculantPoly:
    if p.b == 1:
        if not p.support:
            raise NotAUnit("zero is not a unit")
        return p
    g, _, t = poly_xgcd(_modulus(p.b), p.bits)
    if g != 1:
        raise NotAUnit(f"gcd with x^{p.b}-1 is nontrivial")
    return CirculantPoly.from_bits(p.b, t)


def circ_transpose(p: CirculantPoly) -> CirculantPoly:
    return CirculantPoly(p.b, tuple((-s) % p.b for s in p.support))


# -- block matrices ----------------------------------------------------------

@dataclass
class QcBlockMatrix:
    """A rows x cols grid of shift sets over block size b (H^rep).

    ``cells`` maps (r, c) to a sorted tuple of shifts; empty cells are
    simply absent.  The metadata fields describe where the matrix came from.
    """

    b: int
    rows: int
    cols: int
    cells: dict = field(default_factory=dict)
    family: str = ""
    q: int = 0
    dual: bool = False
    orientation: str = "points-as-rows"
    k: int = 0  # extension degree, set for projective/affine spaces only

    def __post_init__(self):
        clean = {}
        for (r, c), shifts in self.cells.items():
            if not (0 <= r < self.rows and 0 <= c < self.cols):
                raise ValueError(f"cell ({r}, {c}) outside {self.rows}x{self.cols} grid")
            s = tuple(sorted(set(int(x) for x in shifts)))
            if s and (s[0] < 0 or s[-1] >= self.b):
                raise ValueError(f"shift outside [0, {self.b}) in cell ({r}, {c})")
            if s:
                clean[(int(r), int(c))] = s
        self.cells = dict(sorted(clean.items()))

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows * self.b, self.cols * self.b

    def cell(self, r: int, c: int) -> tuple[int, ...]:
        return self.cells.get((r, c), ())

    def poly(self, r: int, c: int) -> CirculantPoly:
        return CirculantPoly(self.b, self.cell(r, c))

    def shift_count(self) -> int:
        return sum(len(s) for s in self.cells.values())

    def row_sums(self) -> np.ndarray:
        out = np.zeros(self.rows, dtype=np.int64)
        for (r, _), s in self.cells.items():
            out[r] += len(s)
        return out

    def col_sums(self) -> np.ndarray:
        out = np.zeros(self.cols, dtype=np.int64)
        for (_, c), s in self.cells.items():
            out[c] += len(s)
        return out

    def grid(self) -> list[list[tuple[int, ...]]]:
        return [[self.cell(r, c) for c in range(self.cols)] for r in range(self.rows)]

    def __eq__(self, other):
        if not isinstance(other, QcBlockMatrix):
            return NotImplemented
        return (self.b, self.rows, self.cols, self.cells) == (
            other.b, other.rows, other.cols, other.cells)


def dualize(h: QcBlockMatrix) -> QcBlockMatrix:
    """Transpose the grid and negate every shift; expands to the transpose."""
    flipped = "lines-as-rows" if h.orientation == "points-as-rows" else "points-as-rows"
    cells = {(c, r): tuple((-s) % h.b for s in shifts) for (r, c), shifts in h.cells.items()}
    return QcBlockMatrix(h.b, h.cols, h.rows, cells, h.family, h.q, not h.dual, flipped, h.k)


# -- sparse binary matrices --------------------------------------------------

class SparseBinaryMatrix:
    """Immutable 0/1 matrix held as CSR and CSC index arrays."""

    def __init__(self, n_rows: int, n_cols: int, rows, cols):
        rows = np.asarray(rows, dtype=np.int64)
        cols = np.asarray(cols, dtype=np.int64)
        if rows.shape != cols.shape:
            raise ValueError("coordinate arrays differ in length")
        if rows.size and (rows.min() < 0 or rows.max() >= n_rows
                          or cols.min() < 0 or cols.max() >= n_cols):
            raise ValueError("coordinate out of range")
        key = np.unique(rows * n_cols + cols)
        self.n_rows, self.n_cols = int(n_rows), int(n_cols)
        r, c = np.divmod(key, max(n_cols, 1))
        self._r, self._c = r, c
        self.row_ptr = np.concatenate([[0], np.cumsum(np.bincount(r, minlength=n_rows))])
        self.row_idx = c
        order = np.lexsort((r, c))
        self.col_ptr = np.concatenate([[0], np.cumsum(np.bincount(c, minlength=n_cols))])
        self.col_idx = r[order]
        for a in (self._r, self._c, self.row_ptr, self.row_idx, self.col_ptr, self.col_idx):
            a.setflags(write=False)

    @classmethod
    def from_dense(cls, a) -> SparseBinaryMatrix:
        a = np.asarray(a)
        r, c = np.nonzero(a % 2)
        return cls(a.shape[0], a.shape[1], r, c)

    @property
    def shape(self) -> tuple[int, int]:
        return self.n_rows, self.n_cols

    @property
    def nnz(self) -> int:
        return int(self._r.size)

    def coords(self) -> tuple[np.ndarray, np.ndarray]:
        return self._r, self._c

    def row(self, i: int) -> np.ndarray:
        return self.row_idx[self.row_ptr[i]:self.row_ptr[i + 1]]

    def col(self, j: int) -> np.ndarray:
        return self.col_idx[self.col_ptr[j]:self.col_ptr[j + 1]]

    def row_weights(self) -> np.ndarray:
        return np.diff(self.row_ptr)

    def col_weights(self) -> np.ndarray:
        return np.diff(self.col_ptr)

    def transpose(self) -> SparseBinaryMatrix:
        return SparseBinaryMatrix(self.n_cols, self.n_rows, self._c, self._r)

    @property
    def T(self) -> SparseBinaryMatrix:
        return self.transpose()

    def to_dense(self) -> np.ndarray:
        out = np.zeros(self.shape, dtype=np.uint8)
        out[self._r, self._c] = 1
        return out

    def packed(self) -> np.ndarray:
        return gf2.pack_rows(self.n_cols, self._r, self._c, self.n_rows)

    def syndrome(self, bits: np.ndarray) -> np.ndarray:
        """H x^T over GF(2); ``bits`` may be a vector or a (frames, n) batch."""
        bits = np.asarray(bits, dtype=np.uint8)
        gathered = bits[..., self.row_idx]
        if self.nnz == 0:
            return np.zeros(bits.shape[:-1] + (self.n_rows,), dtype=np.uint8)
        starts = self.row_ptr[:-1]
        nonempty = np.diff(self.row_ptr) > 0
        sums = np.zeros(bits.shape[:-1] + (self.n_rows,), dtype=np.int64)
        sums[..., nonempty] = np.add.reduceat(gathered, starts[nonempty], axis=-1)
        return (sums & 1).astype(np.uint8)

    def __eq__(self, other):
        if not isinstance(other, SparseBinaryMatrix):
            return NotImplemented
        return (self.shape == other.shape and np.array_equal(self._r, other._r)
                and np.array_equal(self._c, other._c))

    def __repr__(self):
        return f"SparseBinaryMatrix({self.n_rows}x{self.n_cols}, nnz={self.nnz})"


def expand(h: QcBlockMatrix) -> SparseBinaryMatrix:
    b = h.b
    u = np.arange(b, dtype=np.int64)
    rs, cs = [], []
    for (r, c), shifts in h.cells.items():
        s = np.asarray(shifts, dtype=np.int64)
        rs.append(np.repeat(r * b + u, s.size))
        cs.append(c * b + ((u[:, None] + s[None, :]) % b).ravel())
    if rs:
        return SparseBinaryMatrix(h.rows * b, h.cols * b, np.concatenate(rs), np.concatenate(cs))
    return SparseBinaryMatrix(h.rows * b, h.cols * b, [], [])


DEFAULT_MAX_RANK_N = 60_000


def gf2_rank(m: SparseBinaryMatrix, max_n: int | None = DEFAULT_MAX_RANK_N) -> int:
    """Exact GF(2) rank by bit-packed elimination.

    Matrices with more than ``max_n`` columns are refused unless ``max_n``
    is None.
    """
    if max_n is not None and max(m.shape) > max_n:
        raise MatrixTooLarge(f"{m.shape} exceeds max_n={max_n}; pass max_n=None to force")
    if m.n_rows > m.n_cols:
        m = m.transpose()
    return gf2.rank_packed(m.packed(), m.n_cols)


# -- Tanner graph ------------------------------------------------------------

@dataclass(frozen=True)
class TannerMetrics:
    girth: float
    min_row_weight: int
    max_row_weight: int
    min_col_weight: int
    max_col_weight: int
    density: float


def _shortest_cycle_from(src, adj_ptr, adj_idx, n_nodes, bound):
    """Length of the shortest closed walk through a cycle found by BFS from
    ``src``; returns ``bound`` if none shorter than ``bound`` exists."""
    dist = np.full(n_nodes, -1, dtype=np.int64)
    parent = np.full(n_nodes, -1, dtype=np.int64)
    dist[src] = 0
    frontier = np.array([src], dtype=np.int64)
    level = 0
    while frontier.size and 2 * level + 1 < bound:
        counts = adj_ptr[frontier + 1] - adj_ptr[frontier]
        origin = np.repeat(frontier, counts)
        starts = np.repeat(adj_ptr[frontier], counts)
        offs = np.arange(origin.size) - np.repeat(np.cumsum(counts) - counts, counts)
        nbr = adj_idx[starts + offs]
        keep = nbr != parent[origin]
        origin, nbr = origin[keep], nbr[keep]
        if np.any(dist[nbr] == level):
            return 2 * level + 1
        fresh = dist[nbr] < 0
        if not np.all(fresh):
            # a non-parent neighbour at an earlier level would have been seen
            return 2 * level  # pragma: no cover
        uniq, first = np.unique(nbr, return_index=True)
        if uniq.size < nbr.size:
            return min(bound, 2 * level + 2)
        dist[uniq] = level + 1
        parent[uniq] = origin[first]
        frontier = uniq
        level += 1
    return bound


def girth(m: SparseBinaryMatrix, block: int | None = None) -> float:
    """Exact girth of the Tanner graph (math.inf for a forest).

    If ``block`` is given the matrix is assumed quasi-cyclic with that block
    size, and one variable node per block column suffices as a BFS source.
    """
    n, r = m.n_cols, m.n_rows
    # nodes 0..n-1 are variables, n..n+r-1 are checks
    deg = np.concatenate([m.col_weights(), m.row_weights()])
    adj_ptr = np.concatenate([[0], np.cumsum(deg)])
    adj_idx = np.concatenate([m.col_idx + n, m.row_idx])
    if block:
        sources = range(0, n, block)
    else:
        sources = range(n)
    best = math.inf
    for s in sources:
        if deg[s] < 2:
            continue
        found = _shortest_cycle_from(s, adj_ptr, adj_idx, n + r, best)
        best = min(best, found)
        if best == 4:
            break
    return best


def tanner_metrics(m: SparseBinaryMatrix, block: int | None = None) -> TannerMetrics:
    rw, cw = m.row_weights(), m.col_weights()
    size = m.n_rows * m.n_cols
    return TannerMetrics(
        girth=girth(m, block),
        min_row_weight=int(rw.min()) if rw.size else 0,
        max_row_weight=int(rw.max()) if rw.size else 0,
        min_col_weight=int(cw.min()) if cw.size else 0,
        max_col_weight=int(cw.max()) if cw.size else 0,
        density=m.nnz / size if size else 0.0,
    )
