"""File formats: H^rep / P^rep JSON, alist, and code bundles."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from .codegen import CYCLIC, SYSTEMATIC, PrepMatrix, derive_generator, verify_orthogonality
from .geom import build_quadrangle
from .qc import QcBlockMatrix, SparseBinaryMatrix, dualize, expand, gf2_rank, tanner_metrics
from .spaces import build_space


class FormatError(ValueError):
    pass


class ReportMismatch(ValueError):
    pass


def _dump(obj) -> str:
    return json.dumps(obj, indent=1, sort_keys=False) + "\n"


# -- H^rep ---------------------------------------------------------------------

def hrep_to_dict(h: QcBlockMatrix) -> dict:
    d = {"family": h.family, "q": h.q, "b": h.b, "rows": h.rows, "cols": h.cols,
         "dual": h.dual, "orientation": h.orientation}
    if h.k:
        d["k"] = h.k
    d["cells"] = [[r, c, list(s)] for (r, c), s in h.cells.items()]
    return d


def hrep_from_dict(d: dict) -> QcBlockMatrix:
    try:
        cells = {(int(r), int(c)): tuple(s) for r, c, s in d["cells"]}
        return QcBlockMatrix(int(d["b"]), int(d["rows"]), int(d["cols"]), cells,
                             d.get("family", ""), int(d.get("q", 0)), bool(d.get("dual", False)),
                             d.get("orientation", "points-as-rows"), int(d.get("k", 0)))
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"bad hrep data: {exc}") from exc


def hrep_to_json(h: QcBlockMatrix) -> str:
    # one cell per line keeps files diffable
    d = hrep_to_dict(h)
    cells = d.pop("cells")
    head = json.dumps(d)[:-1]
    body = ",\n".join(" " + json.dumps(c, separators=(",", ":")) for c in cells)
    return head + ', "cells": [\n' + body + "\n]}\n"


def hrep_from_json(text: str) -> QcBlockMatrix:
    try:
        return hrep_from_dict(json.loads(text))
    except json.JSONDecodeError as exc:
        raise FormatError(f"bad hrep JSON: {exc}") from exc


def format_grid(h: QcBlockMatrix, one_based: bool = False) -> str:
    """Human-readable grid: one line per block row, cells as {s1,s2,...}."""
    off = 1 if one_based else 0
    lines = []
    for r in range(h.rows):
        cells = ["{" + ",".join(str(s + off) for s in h.cell(r, c)) + "}" for c in range(h.cols)]
        lines.append(" ".join(cells))
    return "\n".join(lines) + "\n"


# -- P^rep ---------------------------------------------------------------------

def prep_to_dict(p: PrepMatrix) -> dict:
    rows = ["".join("1" if x else "0" for x in p.rows[j, t])
            for j in range(p.kb) for t in range(p.cb)]
    return {"b": p.b, "kb": p.kb, "cb": p.cb, "form": p.form, "k": p.k,
            "layout": list(p.layout), "rows": rows}


def prep_from_dict(d: dict) -> PrepMatrix:
    try:
        b, kb, cb = int(d["b"]), int(d["kb"]), int(d["cb"])
        rows = d["rows"]
        if len(rows) != kb * cb or any(len(s) != b or set(s) - {"0", "1"} for s in rows):
            raise FormatError("rows must be kb*cb bit strings of length b")
        arr = np.array([[c == "1" for c in s] for s in rows], dtype=np.uint8).reshape(kb, cb, b)
        form = d.get("form", SYSTEMATIC)
        if form not in (SYSTEMATIC, CYCLIC):
            raise FormatError(f"unknown form {form!r}")
        layout = d.get("layout")
        if layout is None:
            layout = list(range(kb + cb)) if form == SYSTEMATIC else list(range(cb))
        return PrepMatrix(b, kb, cb, arr, tuple(layout), form, int(d.get("k", 0)))
    except (KeyError, TypeError) as exc:
        raise FormatError(f"bad prep data: {exc}") from exc


def prep_to_json(p: PrepMatrix) -> str:
    d = prep_to_dict(p)
    rows = d.pop("rows")
    head = json.dumps(d)[:-1]
    body = ",\n".join(" " + json.dumps(s) for s in rows)
    return head + ', "rows": [\n' + body + "\n]}\n"


def prep_from_json(text: str) -> PrepMatrix:
    try:
        return prep_from_dict(json.loads(text))
    except json.JSONDecodeError as exc:
        raise FormatError(f"bad prep JSON: {exc}") from exc


# -- alist -----------------------------------------------------------------------

def to_alist(m: SparseBinaryMatrix) -> str:
    """MacKay alist text: N M, max weights, weights, then 1-based
    column and row index lists padded with zeros."""
    n, r = m.n_cols, m.n_rows
    cw, rw = m.col_weights(), m.row_weights()
    mc, mr = int(cw.max(initial=0)), int(rw.max(initial=0))
    out = [f"{n} {r}", f"{mc} {mr}", " ".join(map(str, cw)), " ".join(map(str, rw))]
    for j in range(n):
        idx = (m.col(j) + 1).tolist()
        out.append(" ".join(map(str, idx + [0] * (mc - len(idx)))))
    for i in range(r):
        idx = (m.row(i) + 1).tolist()
        out.append(" ".join(map(str, idx + [0] * (mr - len(idx)))))
    return "\n".join(out) + "\n"


def from_alist(text: str) -> SparseBinaryMatrix:
    """Parse alist text and check that both index lists agree with the weights."""
    try:
        tok = [int(t) for t in text.split()]
        pos = 0

        def take(count):
            nonlocal pos
            if pos + count > len(tok):
                raise FormatError("truncated alist")
            vals = tok[pos:pos + count]
            pos += count
            return vals

        n, r = take(2)
        mc, mr = take(2)
        cw, rw = take(n), take(r)
        col_lists = [take(mc) for _ in range(n)]
        row_lists = [take(mr) for _ in range(r)]
    except ValueError as exc:
        raise FormatError(f"bad alist: {exc}") from exc
    if pos != len(tok):
        raise FormatError("trailing data after alist")
    if max(cw, default=0) != mc or max(rw, default=0) != mr:
        raise FormatError("maximum weights disagree with weight lists")
    by_col = set()
    for j, (w, lst) in enumerate(zip(cw, col_lists)):
        idx = [x for x in lst if x]
        if len(idx) != w or any(x < 1 or x > r for x in idx) or lst[w:] != [0] * (mc - w):
            raise FormatError(f"column {j + 1} list inconsistent with its weight")
        by_col.update((i - 1, j) for i in idx)
    by_row = set()
    for i, (w, lst) in enumerate(zip(rw, row_lists)):
        idx = [x for x in lst if x]
        if len(idx) != w or any(x < 1 or x > n for x in idx) or lst[w:] != [0] * (mr - w):
            raise FormatError(f"row {i + 1} list inconsistent with its weight")
        by_row.update((i, j - 1) for j in idx)
    if by_col != by_row:
        raise FormatError("row and column lists describe different matrices")
    coords = np.array(sorted(by_col), dtype=np.int64).reshape(-1, 2)
    return SparseBinaryMatrix(r, n, coords[:, 0], coords[:, 1])


# -- code bundles ----------------------------------------------------------------

@dataclass(frozen=True)
class CodeSpec:
    """Recipe for a check matrix: family, q, orientation and, for spaces, k."""

    family: str
    q: int
    orientation: str = "points-as-rows"
    k: int = 0

    def build(self) -> QcBlockMatrix:
        if self.k:
            h = build_space(self.family, self.k, self.q).hrep
        else:
            h = build_quadrangle(self.family, self.q).hrep
        return h if self.orientation == h.orientation else dualize(h)

    @property
    def label(self) -> str:
        tail = "" if self.orientation == "points-as-rows" else "-dual"
        if self.k:
            return f"{self.family}-k{self.k}-q{self.q}{tail}"
        return f"{self.family}-q{self.q}{tail}"


def compute_report(h: QcBlockMatrix, p: PrepMatrix | None = None,
                   with_girth: bool = True) -> dict:
    m = expand(h)
    rank = gf2_rank(m, max_n=None)
    n = m.n_cols
    rep = {"n": n, "m": m.n_rows, "b": h.b, "grid": [h.rows, h.cols], "rank": rank,
           "dim_C": n - rank, "rate_C": round((n - rank) / n, 6)}
    if p is not None:
        rep.update({"dim_Cprime": p.k, "rate_Cprime": round(p.k / n, 6), "form": p.form,
                    "parity_blocks": list(p.parity_blocks),
                    "orthogonal": bool(verify_orthogonality(h, p))})
    t = tanner_metrics(m, h.b) if with_girth else None
    rw, cw = m.row_weights(), m.col_weights()
    rep.update({"row_weight": [int(rw.min()), int(rw.max())],
                "col_weight": [int(cw.min()), int(cw.max())]})
    if t is not None:
        rep["girth"] = None if t.girth == float("inf") else int(t.girth)
    return rep


@dataclass
class CodeBundle:
    spec: CodeSpec
    hrep: QcBlockMatrix
    prep: PrepMatrix
    report: dict

    @classmethod
    def build(cls, spec: CodeSpec) -> CodeBundle:
        h = spec.build()
        p, _ = derive_generator(h)
        return cls(spec, h, p, compute_report(h, p))

    def save(self, directory) -> Path:
        d = Path(directory)
        d.mkdir(parents=True, exist_ok=True)
        (d / "code.json").write_text(_dump(asdict(self.spec)), encoding="utf-8")
        (d / "hrep.json").write_text(hrep_to_json(self.hrep), encoding="utf-8")
        (d / "prep.json").write_text(prep_to_json(self.prep), encoding="utf-8")
        (d / "report.json").write_text(_dump(self.report), encoding="utf-8")
        return d

    @classmethod
    def load(cls, directory, check: bool = True) -> CodeBundle:
        """Read a bundle; with ``check`` the report is recomputed and compared."""
        d = Path(directory)
        try:
            spec = CodeSpec(**json.loads((d / "code.json").read_text(encoding="utf-8")))
            h = hrep_from_json((d / "hrep.json").read_text(encoding="utf-8"))
            p = prep_from_json((d / "prep.json").read_text(encoding="utf-8"))
            report = json.loads((d / "report.json").read_text(encoding="utf-8"))
        except (OSError, TypeError, json.JSONDecodeError) as exc:
            raise FormatError(f"cannot read bundle {d}: {exc}") from exc
        bundle = cls(spec, h, p, report)
        if check:
            fresh = compute_report(h, p, with_girth="girth" in report)
            diff = {k for k in set(fresh) | set(report) if fresh.get(k) != report.get(k)}
            if diff:
                raise ReportMismatch(f"stored report disagrees on {sorted(diff)}")
        return bundle
