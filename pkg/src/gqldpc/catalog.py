"""Published parameters of the classical GQ codes and a checker for them."""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from .codegen import derive_generator
from .geom import LINES_AS_ROWS, POINTS_AS_ROWS
from .io import CodeSpec
from .qc import QcBlockMatrix, expand, gf2_rank

FULL_BUNDLE_MAX_N = 65_000


@dataclass(frozen=True)
class CatalogEntry:
    table: int
    family: str
    q: int  # for the Hermitian family this is the square root of q^2
    orientation: str
    n: int
    b: int
    grid: tuple[int, int]
    rank: int
    dim_C: int
    rate_C: float
    dim_Cprime: int
    rate_Cprime: float
    rep_shape: tuple[int, int]
    flags: tuple[str, ...] = ()

    @property
    def spec(self) -> CodeSpec:
        return CodeSpec(self.family, self.q, self.orientation)

    @property
    def name(self) -> str:
        sym = {"symplectic": "W(3,{})", "elliptic": "Q(5,{})", "hermitian": "H(4,{})"}[self.family]
        order = self.q * self.q if self.family == "hermitian" else self.q
        tail = "-dual" if self.table in (3, 4, 7) else ""
        return sym.format(order) + tail

    @property
    def full_bundle(self) -> bool:
        return self.n <= FULL_BUNDLE_MAX_N


# n, b, grid, rank, dim C, rate C, dim C', rate C', P^rep/G^rep
_W = [
    (5, 156, 26, (5, 6), 91, 65, 0.41667, 52, 0.33333, (2, 4)),
    (9, 820, 82, (9, 10), 451, 369, 0.45, 328, 0.4, (4, 6)),
    (11, 1464, 122, (11, 12), 793, 671, 0.45833, 610, 0.41667, (5, 7)),
    (19, 7240, 362, (19, 20), 3801, 3439, 0.475, 3258, 0.45, (9, 11)),
    (23, 12720, 530, (23, 24), 6625, 6095, 0.47917, 5830, 0.45833, (11, 13)),
    (25, 16276, 626, (25, 26), 8451, 7825, 0.48077, 7512, 0.46154, (12, 14)),
    (31, 30784, 962, (31, 32), 15873, 14911, 0.48438, 14430, 0.46875, (15, 17)),
    (41, 70664, 1682, (41, 42), 36163, 34481, 0.51176, 33640, 0.47619, (20, 22)),
]
_W_DUAL = [
    (5, 130, 26, (6, 5), 91, 39, 0.3, 26, 0.2, (1, 4)),
    (9, 738, 82, (10, 9), 451, 287, 0.38889, 246, 0.33333, (3, 6)),
    (11, 1342, 122, (12, 11), 793, 549, 0.40909, 488, 0.36364, (4, 7)),
    (19, 6878, 362, (20, 19), 3801, 3077, 0.44737, 2896, 0.42105, (8, 11)),
    (23, 12190, 530, (24, 23), 6625, 5565, 0.45652, 5300, 0.43478, (10, 13)),
    (25, 15650, 626, (26, 25), 8451, 7199, 0.46, 6886, 0.44, (11, 14)),
    (31, 29822, 962, (32, 31), 15873, 13949, 0.46774, 13468, 0.45161, (14, 17)),
    (41, 68962, 1682, (42, 41), 36163, 32799, 0.52439, 31958, 0.46341, (19, 22)),
]
_Q_DUAL = [
    (3, 112, 28, (9, 4), 91, 21, 0.1875, 21, 0.1875, (1, 4)),
    (5, 756, 126, (25, 6), 651, 105, 0.13889, 105, 0.13889, (1, 6)),
    (7, 2752, 344, (49, 8), 2451, 301, 0.10938, 301, 0.10938, (1, 8)),
    (9, 7300, 730, (81, 10), 6643, 657, 0.09, 657, 0.09, (1, 10)),
    (13, 30772, 2198, (169, 14), 28731, 2041, 0.0663, 2041, 0.0663, (1, 14)),
]
_Q = [
    (3, 252, 28, (4, 9), 91, 161, 0.63889, 140, 0.55555, (5, 4)),
    (5, 3150, 126, (6, 25), 651, 2499, 0.79333, 2394, 0.76, (19, 6)),
    (7, 16856, 344, (8, 49), 2451, 14405, 0.85459, 14104, 0.83673, (41, 8)),
    (9, 59130, 730, (10, 81), 6643, 52487, 0.88766, 51830, 0.87654, (71, 10)),
    (11, 161172, 1332, (12, 121), 14763, 146409, 0.90840, 145188, 0.90083, (109, 12)),
    (13, 371462, 2198, (14, 169), 28731, 342731, 0.92265, 340690, 0.91716, (155, 14)),
]
_H = [
    (2, 165, 11, (27, 15), 120, 45, 0.27273, 44, 0.26667, (4, 11)),
    (3, 2440, 61, (112, 40), 1891, 549, 0.225, 549, 0.225, (9, 32)),
    (5, 81276, 521, (756, 156), 68251, 13025, 0.16026, 13025, 0.16026, (25, 31)),
]
_H_DUAL = [
    (2, 297, 11, (15, 27), 120, 177, 0.59596, 176, 0.59259, (16, 11)),
    (3, 6832, 61, (40, 112), 1891, 4941, 0.72321, 4941, 0.72321, (81, 31)),
    (5, 393876, 521, (156, 756), 68251, 325625, 0.82672, 325625, 0.82672, (625, 131)),
]

# (table, family, orientation, rows)
_TABLES = [
    (2, "symplectic", LINES_AS_ROWS, _W),
    (3, "symplectic", POINTS_AS_ROWS, _W_DUAL),
    (4, "elliptic", LINES_AS_ROWS, _Q_DUAL),
    (5, "elliptic", POINTS_AS_ROWS, _Q),
    (6, "hermitian", LINES_AS_ROWS, _H),
    (7, "hermitian", POINTS_AS_ROWS, _H_DUAL),
]

# printed values that disagree with the rest of their own row
_FLAGS = {
    ("symplectic", 41): ("rank-rate-anomaly",),  # printed rate C is rank/n in both tables
    ("symplectic", 41, 2): ("n-typo",),  # 70664 printed, b * 42 = 70644 = rank + dim C
    ("hermitian", 3, 6): ("rep-shape-typo",),  # 9 + 32 != 40 block columns
    ("hermitian", 5, 6): ("rep-shape-typo",),  # 25 + 31 != 156 block columns
}


def _build_entries() -> tuple[CatalogEntry, ...]:
    out = []
    for table, family, orientation, rows in _TABLES:
        for q, n, b, grid, rank, dc, rc, dcp, rcp, rep in rows:
            flags = _FLAGS.get((family, q), ()) + _FLAGS.get((family, q, table), ())
            out.append(CatalogEntry(table, family, q, orientation, n, b, grid, rank, dc, rc,
                                    dcp, rcp, rep, flags))
    return tuple(out)


ENTRIES = _build_entries()


def entries(table: int | None = None, max_n: int | None = None) -> list[CatalogEntry]:
    return [e for e in ENTRIES if (table is None or e.table == table)
            and (max_n is None or e.n <= max_n)]


def lookup(family: str, q: int, orientation: str) -> CatalogEntry:
    for e in ENTRIES:
        if (e.family, e.q, e.orientation) == (family, q, orientation):
            return e
    raise KeyError(f"no catalog row for {family} q={q} {orientation}")


@dataclass
class EntryCheck:
    entry: CatalogEntry
    computed: dict
    mismatches: dict = field(default_factory=dict)
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.mismatches


def structural(h: QcBlockMatrix) -> dict:
    return {"n": h.cols * h.b, "b": h.b, "grid": (h.rows, h.cols)}


def check_entry(e: CatalogEntry, full: bool | None = None) -> EntryCheck:
    """Rebuild a row and compare with the printed values.

    ``full`` also computes rank and the generator; by default it is done
    for rows with n <= FULL_BUNDLE_MAX_N.  The rep shape is compared only
    for rows without a known typo.
    """
    t0 = time.perf_counter()
    full = e.full_bundle if full is None else full
    h = e.spec.build()
    got = structural(h)
    want = {"n": e.n, "b": e.b, "grid": e.grid}
    if "n-typo" in e.flags:
        del want["n"]
    if full:
        p, rep = derive_generator(h)
        got.update({"rank": rep.rank, "dim_C": rep.dim_C, "dim_Cprime": rep.dim_Cprime,
                    "rep_shape": (p.kb, p.cb)})
        want.update({"rank": e.rank, "dim_C": e.dim_C, "dim_Cprime": e.dim_Cprime,
                     "rep_shape": e.rep_shape})
        if "rep-shape-typo" in e.flags:
            del want["rep_shape"]
    mism = {k: (got[k], v) for k, v in want.items() if got[k] != v}
    return EntryCheck(e, got, mism, time.perf_counter() - t0)


def rank_only(e: CatalogEntry) -> int:
    return gf2_rank(expand(e.spec.build()), max_n=None)
