"""Command-line front end: ``gqldpc <command> ...``."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import catalog as cat
from .codegen import derive_generator, verify_orthogonality
from .geom import FAMILIES as GQ_FAMILIES
from .geom import LINES_AS_ROWS, POINTS_AS_ROWS
from .io import (CodeBundle, CodeSpec, ReportMismatch, compute_report, format_grid,
                 hrep_from_json, hrep_to_json, prep_from_json, prep_to_json, to_alist)
from .qc import expand
from .sim import CodeRef, SweepConfig, run_sweep, write_csv
from .spaces import KINDS as SPACE_KINDS
from .spaces import build_space, with_origin

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def parse_snr(text: str) -> tuple[float, ...]:
    """``a:b:step`` (inclusive of b) or a comma list."""
    try:
        if ":" in text:
            a, b, step = (float(x) for x in text.split(":"))
            if step <= 0 or b < a:
                raise ValueError
            count = int(round((b - a) / step)) + 1
            vals = [round(a + i * step, 10) for i in range(count) if a + i * step <= b + 1e-9]
        else:
            vals = [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"bad SNR grid {text!r}; use a:b:step or a,b,c") from None
    if not vals:
        raise UsageError("empty SNR grid")
    return tuple(vals)


def _read(path) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _write(path, text: str):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def _print_json(obj):
    sys.stdout.write(json.dumps(obj, indent=1) + "\n")


def _spec_from_args(args) -> CodeSpec:
    family = args.family
    if family in SPACE_KINDS:
        if not args.k:
            raise UsageError(f"{family} needs --k")
        if family == "pg-line" and args.no_spread:
            family = "pg-line-nospread"
        if family.startswith("ag") and args.all_points:
            family += "-all"
    elif family in GQ_FAMILIES:
        if args.k:
            raise UsageError("--k only applies to projective and affine spaces")
    else:  # pragma: no cover - argparse restricts choices
        raise UsageError(f"unknown family {family}")
    orientation = args.orientation or (LINES_AS_ROWS if args.dual else POINTS_AS_ROWS)
    return CodeSpec(family, args.q, orientation, args.k or 0)


# -- commands ----------------------------------------------------------------

def cmd_construct(args) -> int:
    h = _spec_from_args(args).build()
    if args.print_grid:
        sys.stdout.write(format_grid(h, args.one_based))
    if args.output or not args.print_grid:
        _write(args.output, hrep_to_json(h))
    return EXIT_OK


def cmd_bundle(args) -> int:
    bundle = CodeBundle.build(_spec_from_args(args))
    bundle.save(args.output)
    _print_json(bundle.report)
    return EXIT_OK if bundle.report.get("orthogonal", True) else EXIT_FAIL


def cmd_gen(args) -> int:
    h = hrep_from_json(_read(args.hrep))
    p, rep = derive_generator(h, allow_cyclic=not args.no_cyclic)
    _write(args.output, prep_to_json(p))
    if args.output not in (None, "-"):
        _print_json({"n": rep.n, "b": rep.b, "rank": rep.rank, "dim_C": rep.dim_C,
                     "dim_Cprime": rep.dim_Cprime, "rate_C": round(rep.rate_C, 6),
                     "rate_Cprime": round(rep.rate_Cprime, 6), "form": rep.form,
                     "rep_shape": [p.kb, p.cb], "attempts": rep.attempts, "notes": rep.notes})
    return EXIT_OK


def cmd_rank(args) -> int:
    h = hrep_from_json(_read(args.hrep))
    p = prep_from_json(_read(args.prep)) if args.prep else None
    _print_json(compute_report(h, p, with_girth=args.girth))
    return EXIT_OK


def cmd_verify(args) -> int:
    """Exit 1 unless H G^T = 0 and (for quadrangles) the girth is at least 8."""
    if args.bundle:
        try:
            bundle = CodeBundle.load(args.bundle, check=True)
        except ReportMismatch as exc:
            sys.stderr.write(f"verification failed: {exc}\n")
            return EXIT_FAIL
        h, p = bundle.hrep, bundle.prep
    else:
        if not (args.hrep and args.prep):
            raise UsageError("verify needs a bundle directory or --hrep and --prep")
        h = hrep_from_json(_read(args.hrep))
        p = prep_from_json(_read(args.prep))
    try:
        orth = verify_orthogonality(h, p)
    except ValueError as exc:
        sys.stderr.write(f"verification failed: {exc}\n")
        return EXIT_FAIL
    rep = compute_report(h, p)
    rep["orthogonal"] = bool(orth)
    least = 8 if h.family in GQ_FAMILIES else 6
    rep["girth_ok"] = rep["girth"] is None or rep["girth"] >= least
    _print_json(rep)
    return EXIT_OK if orth and rep["girth_ok"] else EXIT_FAIL


def cmd_expand(args) -> int:
    h = hrep_from_json(_read(args.hrep))
    m = expand(h)
    if args.include_origin:
        if not (h.family.startswith("ag") and h.k):
            raise UsageError("--include-origin needs an affine-space hrep")
        g = build_space(h.family, h.k, h.q)
        if h.orientation != g.hrep.orientation:
            raise UsageError("--include-origin needs the points-as-rows orientation")
        m = with_origin(g, m)
    _write(args.output, to_alist(m))
    return EXIT_OK


def cmd_simulate(args) -> int:
    bundle = CodeBundle.load(args.bundle, check=False)
    code = CodeRef(bundle.hrep, bundle.prep, bundle.spec.label)
    cfg = SweepConfig(code, parse_snr(args.snr), args.iters, args.target_errors, args.max_frames,
                      args.seed, args.workers)

    def progress(r):
        if not args.quiet:
            sys.stderr.write(f"{r.ebn0_db:g} dB: {r.frame_errors}/{r.frames} frames, "
                             f"fer={r.fer:.3g} ber={r.ber:.3g}\n")

    records = run_sweep(cfg, progress)
    path = write_csv(args.output, records, code.rate, timing=args.timing)
    if args.plot:
        from .plotting import plot_sweep
        plot_sweep(records, code.rate, args.plot, title=code.name)
    elif args.plot is None and not args.no_plot:
        from .plotting import plot_sweep
        plot_sweep(records, code.rate, path.with_suffix(".png"), title=code.name)
    return EXIT_OK


def cmd_catalog(args) -> int:
    rows = cat.entries(args.table, args.max_n)
    failed = False
    for e in rows:
        line = {"table": e.table, "code": e.name, "n": e.n, "b": e.b, "grid": list(e.grid),
                "rank": e.rank, "dim_C": e.dim_C, "dim_Cprime": e.dim_Cprime,
                "full_bundle": e.full_bundle, "flags": list(e.flags)}
        if args.check:
            res = cat.check_entry(e)
            line["ok"] = res.ok
            line["mismatches"] = {k: list(v) for k, v in res.mismatches.items()}
            failed |= not res.ok
        if args.build:
            out = Path(args.build) / e.spec.label
            if e.full_bundle:
                CodeBundle.build(e.spec).save(out)
            else:
                out.mkdir(parents=True, exist_ok=True)
                (out / "hrep.json").write_text(hrep_to_json(e.spec.build()), encoding="utf-8")
            line["path"] = str(out)
        sys.stdout.write(json.dumps(line) + "\n")
    return EXIT_FAIL if failed else EXIT_OK


# -- parser ------------------------------------------------------------------

def _add_code_args(p):
    p.add_argument("family", choices=GQ_FAMILIES + SPACE_KINDS)
    p.add_argument("q", type=int, help="field order (the square root of q^2 for hermitian)")
    p.add_argument("--k", type=int, default=0, help="dimension parameter for spaces")
    p.add_argument("--dual", action="store_true", help="lines-as-rows orientation")
    p.add_argument("--orientation", choices=(POINTS_AS_ROWS, LINES_AS_ROWS))
    p.add_argument("--no-spread", action="store_true", help="pg-line: remove the line spread")
    p.add_argument("--all-points", action="store_true",
                   help="ag-*: one block row per orbit of nonzero points")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="gqldpc", description="quasi-cyclic LDPC codes from "
                                 "generalized quadrangles and finite geometries")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", help="write the H^rep JSON of a code")
    _add_code_args(p)
    p.add_argument("-o", "--output")
    p.add_argument("--print", dest="print_grid", action="store_true", help="print the shift grid")
    p.add_argument("--one-based", action="store_true", help="print shifts counting from 1")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("bundle", help="build H^rep, P^rep and report into a directory")
    _add_code_args(p)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_bundle)

    p = sub.add_parser("gen", help="derive P^rep from an H^rep file")
    p.add_argument("hrep")
    p.add_argument("-o", "--output")
    p.add_argument("--no-cyclic", action="store_true", help="fail instead of using a cyclic generator")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("rank", help="report rank, dimensions and weights")
    p.add_argument("hrep")
    p.add_argument("--prep")
    p.add_argument("--girth", action="store_true")
    p.set_defaults(func=cmd_rank)

    p = sub.add_parser("verify", help="check H G^T = 0 and the girth")
    p.add_argument("bundle", nargs="?")
    p.add_argument("--hrep")
    p.add_argument("--prep")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("expand", help="write the expanded H as alist")
    p.add_argument("hrep")
    p.add_argument("-o", "--output")
    p.add_argument("--include-origin", action="store_true", help="affine spaces: add the origin row")
    p.set_defaults(func=cmd_expand)

    p = sub.add_parser("simulate", help="FER/BER sweep of a bundle")
    p.add_argument("bundle")
    p.add_argument("--snr", default="2:6:1")
    p.add_argument("--iters", type=int, default=25)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--target-errors", type=int, default=100)
    p.add_argument("--max-frames", type=int, default=10_000_000)
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--plot", help="figure path (default: CSV path with .png)")
    p.add_argument("--no-plot", action="store_true")
    p.add_argument("--timing", action="store_true", help="write measured wall time")
    p.add_argument("--quiet", action="store_true")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("catalog", help="list (and check or build) the tabulated codes")
    p.add_argument("--table", type=int, choices=range(2, 8))
    p.add_argument("--max-n", type=int)
    p.add_argument("--check", action="store_true", help="rebuild and compare each row")
    p.add_argument("--build", metavar="DIR", help="write bundles (or H^rep only for large rows)")
    p.set_defaults(func=cmd_catalog)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (UsageError, ValueError) as exc:
        # bad parameters, unreadable files and parse errors
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
