"""Cyclic and quasi-cyclic incidence matrices of PG(k-1,q) and AG(k,q).

Points of PG(k-1,q) are x = X^(q-1) for nonzero X in F_{q^k}; those of
AG(k,q) are the field elements themselves.  Rows and columns follow the
labelling convention of :mod:`gqldpc.geom`.
"""

from __future__ import annotations

import math

import numpy as np

from .ff import ZERO, GaloisField, field_for, root_of_unity
from .geom import Geometry, LineClass, UnsupportedParams, assemble, is_zero, msum, scale
from .qc import SparseBinaryMatrix

KINDS = ("pg-hyp", "pg-line", "ag-hyp", "ag-line")


class InvalidParity(ValueError):
    pass


def _check(k: int, least: int):
    if k < least:
        raise UnsupportedParams(f"k must be at least {least}")


# -- F_{q^k} scalar elimination ------------------------------------------------

def matrix_rank(F: GaloisField, rows: list[list[int]]) -> int:
    """Rank of a matrix of logs over F by Gaussian elimination."""
    n1, zech, m1 = F.n1, F.zech.tolist(), F.minus_one

    def add(x, y):
        if x == ZERO:
            return y
        if y == ZERO:
            return x
        z = zech[(y - x) % n1]
        return ZERO if z == ZERO else (x + z) % n1

    m = [list(r) for r in rows]
    rank = 0
    n_cols = len(m[0]) if m else 0
    for col in range(n_cols):
        piv = next((i for i in range(rank, len(m)) if m[i][col] != ZERO), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        p = m[rank]
        for i in range(len(m)):
            if i != rank and m[i][col] != ZERO:
                # row_i -= (m_i,col / p_col) * p
                f = (m[i][col] - p[col] + m1) % n1
                m[i] = [add(x, ZERO if y == ZERO else (y + f) % n1) for x, y in zip(m[i], p)]
        rank += 1
    return rank


def line_matrix(F: GaloisField, a: int, c: int) -> list[list[int]]:
    """The (k-1) x k matrix M_{a,c} (logs) whose rank decides if (a, c) is a line."""
    k = F.k
    out = []
    for r in range(k - 1):
        row = [ZERO] * k
        row[(k - 3 - r) % k] = 0
        row[(k - 2 - r) % k] = F.frobenius(a, r)
        row[(k - 1 - r) % k] = F.frobenius(c, r)
        out.append(row)
    return out


def is_line(F: GaloisField, a: int, c: int) -> bool:
    return matrix_rank(F, line_matrix(F, a, c)) <= F.k - 2


def valid_lines(F: GaloisField, c_values=None) -> tuple[np.ndarray, np.ndarray]:
    """All pairs (a, c) with c a (q-1)-st power and rank(M_{a,c}) <= k-2,
    sorted by (log a, log c)."""
    q = F.q
    if c_values is None:
        c_values = np.arange(0, F.n1, q - 1)
    avals = np.concatenate([[ZERO], F.nonzero()])
    out_a, out_c = [], []
    for a in avals.tolist():
        for c in c_values.tolist():
            if is_line(F, a, c):
                out_a.append(a)
                out_c.append(c)
    return np.array(out_a, dtype=np.int64), np.array(out_c, dtype=np.int64)


def _orbit_reps(F, alpha, b, a, c, q):
    """Greedy orbit representatives under (a, c) -> (alpha^q a, alpha^(q+1) c)."""
    seen = set()
    reps_a, reps_c = [], []
    j = np.arange(b, dtype=np.int64)
    for ai, ci in zip(a.tolist(), c.tolist()):
        if (ai, ci) in seen:
            continue
        reps_a.append(ai)
        reps_c.append(ci)
        oa = scale(F, np.full(b, ai), q * alpha, j)
        oc = scale(F, np.full(b, ci), (q + 1) * alpha, j)
        seen.update(zip(oa.tolist(), oc.tolist()))
    return np.array(reps_a, dtype=np.int64), np.array(reps_c, dtype=np.int64)


# -- PG(k-1, q) ------------------------------------------------------------------

def pg_block(k: int, q: int) -> int:
    return (q**k - 1) // (q - 1)


def pg_point_hyperplane(k: int, q: int) -> Geometry:
    _check(k, 2)
    F = field_for(q, k)
    b = pg_block(k, q)
    alpha = root_of_unity(F, b).alpha
    expo = [(q**j - 1) // (q - 1) for j in range(k)]

    def rule(y, a, c):
        z = F.mul(a, y)
        return msum(F, *[F.pow(z, e) for e in expo])

    def back(a, c, v):
        # tau(a) = alpha^(-1) a
        return scale(F, a, alpha, v), c

    cls = LineClass("hyperplane", np.array([0]), np.array([ZERO]), rule, back)
    g = assemble("pg-hyp", q, F, alpha, b, np.array([0]), [cls], q - 1)
    g.hrep.k = k
    return g


def _pg_line_rule(F, q):
    def rule(y, a, c):
        return msum(F, F.pow(y, q + 1), F.mul(a, y), c)
    return rule


def _pg_line_back(F, q, alpha):
    def back(a, c, v):
        return scale(F, a, -q * alpha, v), scale(F, c, -(q + 1) * alpha, v)
    return back


def pg_point_line(k: int, q: int, spread: bool = True) -> Geometry:
    """Point-line incidences of PG(k-1, q).

    For even k, ``spread=False`` removes the spread {x^(q+1) = -c} and uses
    the larger block (q^k-1)/(q-1); for odd k there is no spread variant.
    """
    _check(k, 3)
    if k % 2 and not spread:
        raise InvalidParity("the spread-removed variant needs even k")
    F = field_for(q, k)
    if k % 2:
        return _pg_lines_odd(F, k, q)
    if spread:
        return _pg_lines_even(F, k, q)
    return _pg_lines_even_nospread(F, k, q)


def _pg_lines_odd(F, k, q):
    b = pg_block(k, q)
    alpha = root_of_unity(F, b).alpha
    a, c = valid_lines(F, np.array([0]))
    expected = (q ** (k - 1) - 1) // (q * q - 1)
    assert a.size == expected, (a.size, expected)
    cls = LineClass("line", a, c, _pg_line_rule(F, q), _pg_line_back(F, q, alpha))
    g = assemble("pg-line", q, F, alpha, b, np.array([0]), [cls], q - 1)
    g.hrep.k = k
    return g


def _pg_lines_even(F, k, q):
    b = (q**k - 1) // (q * q - 1)
    if math.gcd(b, q + 1) != 1:
        raise UnsupportedParams(
            f"PG({k - 1},{q}): x^(q+1)=1 does not give distinct point orbits")
    alpha = root_of_unity(F, b).alpha
    P2 = np.arange(q + 1, dtype=np.int64) * (F.n1 // (q + 1))
    a, c = valid_lines(F)
    La, Lc = _orbit_reps(F, alpha, b, a, c, q)
    assert La.size == (q ** (k - 1) - 1) // (q - 1)
    assert La[0] == ZERO and Lc[0] == 0
    cls = LineClass("line", La, Lc, _pg_line_rule(F, q), _pg_line_back(F, q, alpha))
    g = assemble("pg-line", q, F, alpha, b, P2, [cls], q - 1)
    g.hrep.k = k
    return g


def _pg_lines_even_nospread(F, k, q):
    b = pg_block(k, q)
    alpha = root_of_unity(F, b).alpha
    a, c = valid_lines(F)
    keep = a != ZERO
    La, Lc = _orbit_reps(F, alpha, b, a[keep], c[keep], q)
    assert La.size == q * (q ** (k - 2) - 1) // (q * q - 1)
    cls = LineClass("line", La, Lc, _pg_line_rule(F, q), _pg_line_back(F, q, alpha))
    g = assemble("pg-line-nospread", q, F, alpha, b, np.array([0]), [cls], q - 1)
    g.hrep.k = k
    return g


def pg_spread(k: int, q: int) -> tuple[np.ndarray, np.ndarray]:
    """The spread lines (a = 0) of PG(k-1, q), k even."""
    if k % 2:
        raise InvalidParity("a line spread needs even k")
    F = field_for(q, k)
    a, c = valid_lines(F)
    return a[a == ZERO], c[a == ZERO]


# -- AG(k, q) ------------------------------------------------------------------

def _ag_back(F, alpha):
    def back(a, c, v):
        # tau(a, c) = (a, alpha^(-1) c)
        return a, scale(F, c, alpha, v)
    return back


def _field_q(F: GaloisField) -> np.ndarray:
    return np.concatenate([[ZERO], F.subfield(F.q)])


def _ag_point_reps(F: GaloisField, b: int, all_points: bool) -> np.ndarray:
    """Orbit 1 only, or one orbit lambda <alpha> per lambda in F_q^*."""
    if all_points and math.gcd(b, F.q - 1) != 1:
        # <alpha> then meets F_q^* and repeats every direction
        raise UnsupportedParams(f"AG({F.k},{F.q}): <alpha> is not a set of directions")
    count = F.n1 // b if all_points else 1
    return np.arange(count, dtype=np.int64) * b


def ag_point_hyperplane(k: int, q: int, all_points: bool = False) -> Geometry:
    """Point-hyperplane incidences of AG(k, q) at block size (q^k-1)/(q-1).

    By default only the points of <alpha> are rows, a 1 x q grid.  For q > 2
    that is one of the q - 1 orbits of nonzero points; ``all_points`` adds
    the others as further block rows.
    """
    _check(k, 2)
    F = field_for(q, k)
    b = pg_block(k, q)
    alpha = root_of_unity(F, b).alpha
    avals = _field_q(F)

    def rule(y, a, c):
        return F.sub(F.trace(F.mul(c, y)), a)

    cls = LineClass("hyperplane", avals, np.zeros(avals.size, dtype=np.int64), rule,
                    _ag_back(F, alpha))
    family = "ag-hyp-all" if all_points else "ag-hyp"
    g = assemble(family, q, F, alpha, b, _ag_point_reps(F, b, all_points), [cls], 1)
    g.hrep.k = k
    return g


def trace_zero(F: GaloisField) -> np.ndarray:
    allx = np.concatenate([[ZERO], F.nonzero()])
    return allx[is_zero(F.trace(allx))]


def ag_point_line(k: int, q: int, all_points: bool = False) -> Geometry:
    """Point-line incidences of AG(k, q); ``all_points`` as for hyperplanes."""
    _check(k, 2)
    F = field_for(q, k)
    b = pg_block(k, q)
    alpha = root_of_unity(F, b).alpha
    L1 = trace_zero(F)
    assert L1.size == q ** (k - 1)

    def rule(y, a, c):
        z = F.mul(c, y)
        return msum(F, F.pow(z, q), F.neg(z), F.neg(a))

    cls = LineClass("line", L1, np.zeros(L1.size, dtype=np.int64), rule, _ag_back(F, alpha))
    family = "ag-line-all" if all_points else "ag-line"
    g = assemble(family, q, F, alpha, b, _ag_point_reps(F, b, all_points), [cls], 1)
    g.hrep.k = k
    return g


def with_origin(g: Geometry, h: SparseBinaryMatrix) -> SparseBinaryMatrix:
    """Append the affine origin as a bordered last row (points-as-rows).

    The origin lies on exactly the hyperplanes / lines whose constant a is 0,
    i.e. the whole column block a = 0.
    """
    if not g.hrep.family.startswith("ag"):
        raise ValueError("the origin row only applies to affine spaces")
    rows, cols = h.coords()
    extra = np.nonzero(g.line_a == ZERO)[0]
    return SparseBinaryMatrix(h.n_rows + 1, h.n_cols,
                              np.concatenate([rows, np.full(extra.size, h.n_rows)]),
                              np.concatenate([cols, extra]))


BUILDERS = {
    "pg-hyp": pg_point_hyperplane,
    "pg-line": pg_point_line,
    "pg-line-nospread": lambda k, q: pg_point_line(k, q, spread=False),
    "ag-hyp": ag_point_hyperplane,
    "ag-line": ag_point_line,
    "ag-hyp-all": lambda k, q: ag_point_hyperplane(k, q, all_points=True),
    "ag-line-all": lambda k, q: ag_point_line(k, q, all_points=True),
}


def build_space(kind: str, k: int, q: int) -> Geometry:
    try:
        return BUILDERS[kind](k, q)
    except KeyError:
        raise UnsupportedParams(f"unknown space kind {kind!r}") from None
