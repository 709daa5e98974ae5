"""Quasi-cyclic incidence matrices of the classical generalized quadrangles.

Q(5,q) and W(3,q) are built with and without a spread, H(4,q^2) without.
All incidence tests are evaluated in discrete-log form over the whole
multiplicative group of the ambient field.

Labelling convention shared with :mod:`gqldpc.spaces`: if ``tau`` is the
line map with  y on l  <=>  alpha*y on tau(l), then row u of row block r is
the point alpha^(-u) x_r and column v of column block c is the line
tau^(-v)(l_c).  Under this labelling the expanded cell (r, c) is exactly
the circulant with shift set {i : alpha^i x_r on l_c}.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .ff import ZERO, GaloisField, field_for, find_gamma, root_of_unity
from .qc import QcBlockMatrix, SparseBinaryMatrix, dualize, expand, girth

FAMILIES = ("elliptic", "elliptic-full", "symplectic", "symplectic-full", "hermitian")
POINTS_AS_ROWS = "points-as-rows"
LINES_AS_ROWS = "lines-as-rows"


class InsufficientOrbits(ValueError):
    pass


class UnsupportedParams(ValueError):
    pass


# -- small field helpers ---------------------------------------------------

def msum(F: GaloisField, *terms):
    acc = terms[0]
    for t in terms[1:]:
        acc = F.add(acc, t)
    return acc


def is_zero(x) -> np.ndarray:
    return np.asarray(x) == ZERO


def scale(F: GaloisField, logs, step: int, times) -> np.ndarray:
    """logs * w^(step*times), leaving ZERO untouched."""
    logs = np.asarray(logs, dtype=np.int64)
    out = (logs + step * np.asarray(times, dtype=np.int64)) % F.n1
    return np.where(logs == ZERO, ZERO, out)


# -- representatives ---------------------------------------------------------

def select_reps(F: GaloisField, elements, b: int, count: int | None = None) -> np.ndarray:
    """First element (in increasing log order) of each class x ~ y  iff  x^b = y^b."""
    elements = np.sort(np.asarray(elements, dtype=np.int64))
    _, first = np.unique(F.pow(elements, b), return_index=True)
    reps = elements[np.sort(first)]
    if count is not None:
        if reps.size < count:
            raise InsufficientOrbits(f"{reps.size} classes, need {count}")
        reps = reps[:count]
    return reps


def select_reps_pairs(keys: np.ndarray, a, c, count: int | None = None):
    """Greedy representatives for pairs, ordered by (log c, log a)."""
    a = np.asarray(a, dtype=np.int64)
    c = np.asarray(c, dtype=np.int64)
    order = np.lexsort((a, c))
    keys = np.asarray(keys)[order]
    _, first = np.unique(keys, axis=0, return_index=True)
    pick = order[np.sort(first)]
    if count is not None:
        if pick.size < count:
            raise InsufficientOrbits(f"{pick.size} classes, need {count}")
        pick = pick[:count]
    return a[pick], c[pick]


# -- geometry record ---------------------------------------------------------

Incidence = Callable[[np.ndarray, np.ndarray, np.ndarray], np.ndarray]


@dataclass
class LineClass:
    """A kind of line (e.g. the A-lines or the spread) with its cell rule.

    ``rule(y, a, c)`` returns the log of the incidence polynomial (ZERO when
    y lies on the line); ``back(a, c, v)`` returns tau^(-v)(a, c).
    """

    name: str
    reps_a: np.ndarray
    reps_c: np.ndarray
    rule: Incidence
    back: Callable
    spread: bool = False


@dataclass
class Geometry:
    """A constructed quasi-cyclic incidence structure with full labels.

    ``hrep`` is in points-as-rows orientation.  Per expanded row the log of
    the point is in ``point_log``; per expanded column the line is
    (``line_a``, ``line_c``) of class ``line_class``.  Points are
    x = X^d for a vector X of the underlying space with d = ``point_power``.
    """

    family: str
    q: int
    field: GaloisField
    alpha: int
    b: int
    hrep: QcBlockMatrix
    point_reps: np.ndarray
    classes: list[LineClass]
    point_power: int
    point_log: np.ndarray = field(repr=False, default=None)
    line_a: np.ndarray = field(repr=False, default=None)
    line_c: np.ndarray = field(repr=False, default=None)
    line_class: np.ndarray = field(repr=False, default=None)

    def oriented(self, orientation: str = POINTS_AS_ROWS) -> QcBlockMatrix:
        if orientation == POINTS_AS_ROWS:
            return self.hrep
        if orientation == LINES_AS_ROWS:
            return dualize(self.hrep)
        raise ValueError(f"unknown orientation {orientation!r}")


def _cell_sets(F, alpha, b, point_reps, reps_a, reps_c, rule):
    i = np.arange(b, dtype=np.int64)
    cols = []
    for a, c in zip(reps_a, reps_c):
        y = (np.asarray(point_reps)[:, None] + alpha * i[None, :]) % F.n1
        hit = is_zero(rule(y, np.full_like(y, a), np.full_like(y, c)))
        cols.append([tuple(np.nonzero(row)[0].tolist()) for row in hit])
    return cols


def assemble(family, q, F, alpha, b, point_reps, classes, point_power) -> Geometry:
    columns, la, lc, lk = [], [], [], []
    v = np.arange(b, dtype=np.int64)
    for k, cl in enumerate(classes):
        columns += _cell_sets(F, alpha, b, point_reps, cl.reps_a, cl.reps_c, cl.rule)
        for a, c in zip(cl.reps_a, cl.reps_c):
            ba, bc = cl.back(np.full(b, a), np.full(b, c), v)
            la.append(ba)
            lc.append(bc)
            lk.append(np.full(b, k))
    cells = {}
    for col, per_row in enumerate(columns):
        for row, shifts in enumerate(per_row):
            if shifts:
                cells[(row, col)] = shifts
    hrep = QcBlockMatrix(b, len(point_reps), len(columns), cells, family, q, False, POINTS_AS_ROWS)
    u = np.arange(b, dtype=np.int64)
    point_log = ((np.asarray(point_reps)[:, None] - alpha * u[None, :]) % F.n1).ravel()
    empty = np.zeros(0, dtype=np.int64)
    return Geometry(family, q, F, alpha, b, hrep, np.asarray(point_reps), classes, point_power,
                    point_log,
                    np.concatenate(la) if la else empty,
                    np.concatenate(lc) if lc else empty,
                    np.concatenate(lk) if lk else empty)


def _back_a(F, step):
    """tau(a) = w^step * a on the a-coordinate only."""
    return lambda a, c, v: (scale(F, a, -step, v), c)


def _back_c(F, step):
    return lambda a, c, v: (a, scale(F, c, -step, v))


# -- Q(5,q): elliptic quadric ------------------------------------------------

def elliptic_points(q: int) -> np.ndarray:
    F = field_for(q, 6)
    x = F.nonzero()
    e = q**3 + 1
    val = msum(F, 0, F.pow(x, e), F.pow(x, e * (q + 1)))
    return x[is_zero(val)]


def elliptic_lines_A(q: int) -> np.ndarray:
    F = field_for(q, 6)
    a = F.nonzero()
    val = msum(F, 0, F.pow(a, q**3 + 1), F.pow(a, q**4 + q), F.pow(a, q**5 + q**2))
    return a[is_zero(val)]


def elliptic_lines_C(q: int) -> np.ndarray:
    F = field_for(q, 6)
    c = F.nonzero()
    val = msum(F, 0, F.pow(c, q * q - q + 1), F.pow(c, q**3 + 1))
    return c[is_zero(val)]


def _elliptic_rule_A(F, q):
    def rule(y, a, c):
        # sign of the last term follows from l_a(X) = aX^(q^2) - X^q - a^(q^2) X
        return msum(F, F.mul(a, F.pow(y, q + 1)), F.neg(y), F.neg(F.pow(a, q * q)))
    return rule


def _spread_rule(F, q):
    def rule(y, a, c):
        return F.sub(F.pow(y, q + 1), c)
    return rule


def elliptic_full_block(q: int) -> int:
    m = q * q - q + 1
    return m // 3 if q % 3 == 2 else m


def hrep_elliptic_nospread(q: int) -> Geometry:
    F = field_for(q, 6)
    b = q**3 + 1
    alpha = root_of_unity(F, b).alpha
    P1 = select_reps(F, elliptic_points(q), b, q + 1)
    L1 = select_reps(F, elliptic_lines_A(q), b, q * q)
    step = (-q * alpha) % F.n1
    A = LineClass("A", L1, np.full(L1.size, ZERO), _elliptic_rule_A(F, q), _back_a(F, step))
    return assemble("elliptic", q, F, alpha, b, P1, [A], q - 1)


def hrep_elliptic_full(q: int) -> Geometry:
    F = field_for(q, 6)
    m = elliptic_full_block(q)
    alpha = root_of_unity(F, m).alpha
    pts = elliptic_points(q)
    P2 = select_reps(F, pts, m, pts.size // m)
    LC = elliptic_lines_C(q)
    LA = elliptic_lines_A(q)
    L2C = select_reps(F, LC, m, LC.size // m)
    L2A = select_reps(F, LA, m, LA.size // m)
    C = LineClass("C", np.full(L2C.size, ZERO), L2C, _spread_rule(F, q),
                  _back_c(F, (q + 1) * alpha), spread=True)
    A = LineClass("A", L2A, np.full(L2A.size, ZERO), _elliptic_rule_A(F, q),
                  _back_a(F, (-q * alpha) % F.n1))
    return assemble("elliptic-full", q, F, alpha, m, P2, [C, A], q - 1)


def quadratic_form(F: GaloisField, q: int, X):
    return msum(F, F.pow(X, q**3 + 1), F.pow(X, q**4 + q), F.pow(X, q**5 + q**2))


# -- W(3,q): symplectic quadrangle -----------------------------------------

def symplectic_points(q: int) -> np.ndarray:
    F = field_for(q, 4)
    x = F.nonzero()
    return x[F.pow(x, (q * q + 1) * (q + 1)) == 0]


def symplectic_lines_A(q: int) -> np.ndarray:
    F = field_for(q, 4)
    g = find_gamma(F)
    a = F.nonzero()
    val = msum(F,
               F.mul(F.pow(g, 1 - q), F.pow(a, q * (q * q + 1))),
               F.neg(F.mul(F.pow(g, q - 1), F.pow(a, q * q + 1))),
               0)
    return a[is_zero(val)]


def symplectic_lines_C(q: int) -> np.ndarray:
    F = field_for(q, 4)
    c = F.nonzero()
    return c[F.pow(c, q * q + 1) == 0]


def _symplectic_rule_A(F, q):
    g = find_gamma(F)
    g1 = F.pow(g, 1 - q)

    def rule(y, a, c):
        return msum(F, F.mul(a, F.pow(y, q + 1)), y, F.neg(F.mul(g1, F.pow(a, q))))
    return rule


def symplectic_full_block(q: int) -> int:
    return q * q + 1 if q % 2 == 0 else (q * q + 1) // 2


def hrep_symplectic_nospread(q: int) -> Geometry:
    F = field_for(q, 4)
    b = q * q + 1
    alpha = root_of_unity(F, b).alpha
    P1 = select_reps(F, symplectic_points(q), b, q + 1)
    L1 = select_reps(F, symplectic_lines_A(q), b, q)
    A = LineClass("A", L1, np.full(L1.size, ZERO), _symplectic_rule_A(F, q),
                  _back_a(F, (-q * alpha) % F.n1))
    return assemble("symplectic", q, F, alpha, b, P1, [A], q - 1)


def hrep_symplectic_full(q: int) -> Geometry:
    F = field_for(q, 4)
    m = symplectic_full_block(q)
    alpha = root_of_unity(F, m).alpha
    pts = symplectic_points(q)
    P2 = select_reps(F, pts, m, pts.size // m)
    LC, LA = symplectic_lines_C(q), symplectic_lines_A(q)
    L2C = select_reps(F, LC, m, LC.size // m)
    L2A = select_reps(F, LA, m, LA.size // m)
    C = LineClass("C", np.full(L2C.size, ZERO), L2C, _spread_rule(F, q),
                  _back_c(F, (q + 1) * alpha), spread=True)
    A = LineClass("A", L2A, np.full(L2A.size, ZERO), _symplectic_rule_A(F, q),
                  _back_a(F, (-q * alpha) % F.n1))
    return assemble("symplectic-full", q, F, alpha, m, P2, [C, A], q - 1)


def symplectic_form(F: GaloisField, q: int, X, Y):
    g = find_gamma(F)
    gq = F.pow(g, q)
    return msum(F,
                F.mul(g, F.mul(X, F.pow(Y, q * q))),
                F.mul(gq, F.mul(F.pow(X, q), F.pow(Y, q**3))),
                F.neg(F.mul(g, F.mul(F.pow(X, q * q), Y))),
                F.neg(F.mul(gq, F.mul(F.pow(X, q**3), F.pow(Y, q)))))


# -- H(4,q^2): Hermitian variety ---------------------------------------------

def hermitian_block(q: int) -> int:
    return (q**5 + 1) // (q + 1)


def hermitian_points(q: int) -> np.ndarray:
    F = field_for(q, 10)
    x = F.nonzero()
    e = q**5 + 1
    b = hermitian_block(q)
    val = msum(F, 0, F.pow(x, e), F.pow(x, e * (q * q + 1)), F.pow(x, b),
               F.pow(x, (q * q + q + 1) * b))
    return x[is_zero(val)]


def _delta(F, q, c):
    return F.add(F.pow(F.add(0, c), q * q + 1), F.pow(c, q))


def _omega(F, q, c):
    return F.add(F.pow(F.add(0, c), q**4 + 1), F.pow(c, q**4 - q * q + 1))


def hermitian_lines_prime(q: int) -> tuple[np.ndarray, np.ndarray]:
    """The lines (a, c) with Delta(c) != 0 and Omega(c) = 0."""
    F = field_for(q, 10)
    b = hermitian_block(q)
    c = F.nonzero()
    c = c[~is_zero(_delta(F, q, c)) & is_zero(_omega(F, q, c))]
    q2, q3, q4 = q * q, q**3, q**4
    num = F.mul(c, msum(F, F.pow(c, q2 + q4), F.pow(c, q2),
                        F.neg(F.pow(c, q4 + q3 - q)), F.neg(F.pow(c, q4 + q3))))
    den = msum(F, F.pow(c, q4 + q), F.pow(c, q), F.pow(c, q4 + q3 + q),
               F.pow(c, q + q3), F.pow(c, q3 + q4))
    if np.any(is_zero(den)):
        raise AssertionError("vanishing denominator")  # pragma: no cover
    t = F.div(num, den)
    out_a, out_c = [], []
    step = F.n1 // b
    for ci, ti in zip(c, t):
        if ti == ZERO:
            out_a.append(np.array([ZERO]))
            out_c.append(np.array([ci]))
        elif ti % b == 0:
            # the b solutions of a^b = t
            root = ti // b
            sols = (root + step * np.arange(b)) % F.n1
            out_a.append(sols)
            out_c.append(np.full(b, ci))
    if not out_a:
        return np.zeros(0, np.int64), np.zeros(0, np.int64)
    return np.concatenate(out_a), np.concatenate(out_c)


def hermitian_lines_second(q: int) -> tuple[np.ndarray, np.ndarray]:
    """The lines (a, c) with Delta(c) = 0."""
    F = field_for(q, 10)
    b = hermitian_block(q)
    c = F.nonzero()
    roots = c[is_zero(_delta(F, q, c))]
    a = np.concatenate([[ZERO], F.nonzero()])
    out_a, out_c = [], []
    for ci in roots:
        val = msum(F, F.pow(a, q**5 + 1),
                   F.mul(F.pow(ci, q - q * q), F.pow(a, b)), F.neg(ci))
        sol = a[is_zero(val)]
        out_a.append(sol)
        out_c.append(np.full(sol.size, ci))
    return np.concatenate(out_a), np.concatenate(out_c)


def hermitian_lines(q: int) -> tuple[np.ndarray, np.ndarray]:
    a1, c1 = hermitian_lines_prime(q)
    a2, c2 = hermitian_lines_second(q)
    return np.concatenate([a1, a2]), np.concatenate([c1, c2])


def _hermitian_rule(F, q):
    def rule(y, a, c):
        return msum(F, F.pow(y, q * q + 1),
                    F.neg(F.mul(F.pow(a, q * q), y)),
                    F.neg(F.div(F.pow(a, q * q + 1), c)))
    return rule


def hrep_hermitian(q: int) -> Geometry:
    F = field_for(q, 10)
    b = hermitian_block(q)
    alpha = root_of_unity(F, b).alpha
    pts = hermitian_points(q)
    P1 = select_reps(F, pts, b, pts.size // b)
    a, c = hermitian_lines(q)
    keys = np.stack([c, F.pow(a, b)], axis=1)
    La, Lc = select_reps_pairs(keys, a, c, a.size // b)

    def back(a, c, v):
        return scale(F, a, -alpha, v), c
    H = LineClass("L", La, Lc, _hermitian_rule(F, q), back)
    return assemble("hermitian", q, F, alpha, b, P1, [H], q * q - 1)


def hermitian_form(F: GaloisField, q: int, X):
    return msum(F, F.pow(X, q**5 + 1), F.pow(X, q**7 + q**2), F.pow(X, q**9 + q**4),
                F.pow(X, q + q**6), F.pow(X, q**3 + q**8))


def hermitian_sesquilinear(F: GaloisField, q: int, X, Y):
    """h(X,Y) with h(X,X) the Hermitian form above (conjugation X -> X^(q^5))."""
    terms = []
    for j in range(5):
        one = q ** (2 * j)
        terms.append(F.mul(F.pow(X, one), F.pow(Y, one * q**5)))
    return msum(F, *terms)


# -- dispatch ----------------------------------------------------------------

BUILDERS = {
    "elliptic": hrep_elliptic_nospread,
    "elliptic-full": hrep_elliptic_full,
    "symplectic": hrep_symplectic_nospread,
    "symplectic-full": hrep_symplectic_full,
    "hermitian": hrep_hermitian,
}


def build_quadrangle(family: str, q: int) -> Geometry:
    """Build a GQ family; for the Hermitian family q is the square root of the order q^2."""
    try:
        builder = BUILDERS[family]
    except KeyError:
        raise UnsupportedParams(f"unknown family {family!r}") from None
    return builder(q)


def is_full_gq(family: str) -> bool:
    """Whether the family is the whole quadrangle (no spread removed)."""
    return family.endswith("-full") or family == "hermitian"


def order_st(family: str, q: int) -> tuple[int, int]:
    """GQ order (s, t): s+1 points per line, t+1 lines per point."""
    if family.startswith("elliptic"):
        return q, q * q
    if family.startswith("symplectic"):
        return q, q
    return q * q, q**3


# -- validation --------------------------------------------------------------

def _vectors(F, x, d):
    """Some X with X^d = x (x must be a d-th power)."""
    x = np.asarray(x, dtype=np.int64)
    if np.any(x % d):
        raise AssertionError("point is not a d-th power")
    return x // d


def _span_points(F, sub, d, X1, X2):
    """Projective points (as x = X^d logs) of the span of X1, X2 over the subfield."""
    lam = np.concatenate([[ZERO], F.subfield(sub)])
    combos = F.add(X1, F.mul(lam, X2))
    return np.sort(np.concatenate([F.pow(combos, d), [F.pow(X2, d)]]))


def validate_quadrangle(g: Geometry, h: SparseBinaryMatrix | None = None,
                        check_lines: bool = True) -> list[str]:
    """Return the list of violations (empty means pass).

    Checks: every incidence of ``h`` satisfies its cell rule for the labelled
    point and line; each line is a full projective line on which the
    defining form vanishes; two points share at most one line (girth >= 6)
    and the girth is 8; each point lies on exactly one spread line.
    """
    problems: list[str] = []
    if h is None:
        h = expand(g.hrep)
    if h.shape != g.hrep.shape and h.shape[::-1] == g.hrep.shape:
        h = h.transpose()
    F, q = g.field, g.q
    s, t = order_st(g.family, q)
    rows, cols = h.coords()
    for k, cl in enumerate(g.classes):
        sel = g.line_class[cols] == k
        val = cl.rule(g.point_log[rows[sel]], g.line_a[cols[sel]], g.line_c[cols[sel]])
        if not np.all(is_zero(val)):
            problems.append(f"{np.count_nonzero(~is_zero(val))} entries break the {cl.name} rule")
    cw = h.col_weights()
    if np.any(cw != s + 1):
        problems.append(f"column weights {sorted(set(cw.tolist()))}, expected {s + 1}")
    if check_lines:
        problems += _check_line_spans(g, h)
    gi = girth(h, g.b if h.shape == g.hrep.shape else None)
    if gi < 6:
        problems.append(f"girth {gi}: two points share more than one line")
    elif gi < 8 or (gi != 8 and is_full_gq(g.family)):
        problems.append(f"girth {gi}, expected {'8' if is_full_gq(g.family) else '>= 8'}")
    spread_cols = np.nonzero(np.isin(g.line_class, [k for k, c in enumerate(g.classes) if c.spread]))[0]
    if spread_cols.size:
        hits = np.bincount(rows[np.isin(cols, spread_cols)], minlength=h.n_rows)
        if np.any(hits != 1):
            problems.append("spread lines do not partition the points")
    return problems


def _check_line_spans(g: Geometry, h: SparseBinaryMatrix) -> list[str]:
    F, q, d = g.field, g.q, g.point_power
    sub = q * q if g.family == "hermitian" else q
    bad_span = bad_form = 0
    for j in range(h.n_cols):
        pts = g.point_log[h.col(j)]
        if pts.size < 2:
            bad_span += 1
            continue
        X = _vectors(F, pts, d)
        span = _span_points(F, sub, d, X[0], X[1])
        if not np.array_equal(span, np.sort(pts)):
            bad_span += 1
            continue
        if g.family.startswith("elliptic"):
            ok = np.all(is_zero(quadratic_form(F, q, X)))
            lam = F.subfield(q)
            ok = ok and np.all(is_zero(quadratic_form(F, q, F.add(X[0], F.mul(lam, X[1])))))
        elif g.family.startswith("symplectic"):
            ok = np.all(is_zero(symplectic_form(F, q, X[0], X)))
        else:
            ok = bool(np.all(is_zero(hermitian_form(F, q, X)))
                      and np.all(is_zero(hermitian_sesquilinear(F, q, X[0], X))))
        bad_form += not ok
    out = []
    if bad_span:
        out.append(f"{bad_span} columns are not projective lines")
    if bad_form:
        out.append(f"{bad_form} lines are not totally isotropic")
    return out
