"""``frameslab`` command line.

Every subcommand writes to ``--out`` (stdout when omitted).  CSV floats use
17 significant digits and JSON keys are sorted, so identical inputs and
seeds give byte-identical files.
"""
from __future__ import annotations

import argparse
import io
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import _accel
from .config import as_jsonable, load_config, validate_output
from .convex_body import ConvexBody
from .decay_profile import DEFAULT_DELTA, DEFAULT_P, coarea_shell_integral
from .erdos_checker import classify, general_residuals
from .errors import DomainError, ParseError, ResourceError
from .fourier_body import fit_herz_constant, herz_error_scan
from .gram_frames import frame_diagnostics, gram_matrix, riesz_report
from .pinned_coverage import GridSet, load_mask, pinned_distance_coverage, refinement_coverage
from .pointsets import (bessel_zero_line_set, lattice, load_points, perturb, progression_line_set,
                        save_points)

__all__ = ["run", "main", "fmt"]

COMMANDS = ("ft", "profile", "gram", "erdos", "pinned", "gen", "coarea", "report")


def fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "1" if x else "0"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), ".17g")


def _csv(header, rows) -> str:
    buf = io.StringIO()
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(fmt(v) for v in row) + "\n")
    return buf.getvalue()


def _json(doc) -> str:
    return json.dumps(as_jsonable(doc), sort_keys=True, indent=2, allow_nan=False) + "\n"


def _emit(text: str, out) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


# -- argument helpers ----------------------------------------------------------


def _add_body(p, dim_required=False):
    p.add_argument("--body", choices=("ball", "ellipsoid"), default="ball")
    p.add_argument("--dim", type=int, required=dim_required, help="dimension (default: from points)")
    p.add_argument("--axes", type=float, nargs="+", help="semi-axes, or one radius for a ball")


def _body(args, dim=None) -> ConvexBody:
    d = args.dim if args.dim is not None else dim
    if d is None:
        raise DomainError("--dim is required")
    if dim is not None and d != dim:
        raise DomainError(f"--dim {d} does not match point dimension {dim}")
    spec = {"kind": args.body, "dim": d}
    if args.axes:
        spec["semi_axes"] = args.axes
    return ConvexBody.from_spec(spec)


def _points_and_body(args):
    A = load_points(args.points)
    return A, _body(args, A.dimension)


# -- subcommands -----------------------------------------------------------------


def cmd_ft(args) -> int:
    body = _body(args)
    scan = herz_error_scan(body, args.rmin, args.rmax, args.samples, args.direction)
    rows = zip(scan.radii, scan.exact, scan.main, scan.error, scan.scaled_error)
    _emit(_csv(["r", "exact", "main", "error", "scaled_error"], rows), args.out)
    if args.fit:
        c = fit_herz_constant(body, direction=args.direction)
        sys.stderr.write(f"fitted constant {fmt(c)} (1/pi = {fmt(1 / math.pi)})\n")
    return 0


def _j_range(args):
    if (args.j_min is None) != (args.j_max is None):
        raise DomainError("give both --j-min and --j-max or neither")
    return None if args.j_min is None else (args.j_min, args.j_max)


def cmd_profile(args) -> int:
    A, body = _points_and_body(args)
    diag = frame_diagnostics(A, body, args.p, args.pin, _j_range(args), args.delta, args.shell)
    rows = []
    for i, prof in zip(diag.pins, diag.profiles):
        for j, c, n, f in zip(prof.j_values, prof.c_values, prof.counts, prof.sin_fraction):
            rows.append((i, j, n, c, f))
    _emit(_csv(["pin_index", "j", "count", "c_j", "sin_fraction"], rows), args.out)
    if args.summary:
        _emit(_json(diag.summary), args.summary)
    return 0


def cmd_gram(args) -> int:
    A, body = _points_and_body(args)
    G = gram_matrix(A, body)
    rep = riesz_report(A, body, args.p, args.pin, _j_range(args), args.delta, tol=args.tol, G=G)
    doc = rep.to_dict()
    validate_output("gram", doc)
    _emit(_json(doc), args.out)
    if args.matrix:
        n = G.shape[0]
        _emit(_csv([f"c{k}" for k in range(n)], G.tolist()), args.matrix)
    return 0


def cmd_erdos(args) -> int:
    A, body = _points_and_body(args)
    c1 = 0.5 if args.c1 is None else args.c1
    c2 = (body.dim - 1) / 8 if args.c2 is None else args.c2
    rep = general_residuals(A, body, c1, c2)
    tol = args.tol if args.tol is not None else 1e-9
    verdict = classify(A, body, residual_tol=tol, line_tol=args.line_tol,
                       size_threshold=args.size_threshold)
    doc = verdict.to_dict()
    doc.update({"c1": c1, "c2": c2})
    validate_output("erdos", doc)
    _emit(_json(doc), args.out)
    if args.csv:
        _emit(_csv(["i", "j", "distance", "nearest_k", "residual", "scaled_residual"], rep.rows()), args.csv)
    return 0


def _grid(args) -> GridSet:
    if args.mask:
        return load_mask(args.mask)
    lo, hi = args.box[:2], args.box[2:]
    if args.grid == "checkerboard":
        return GridSet.checkerboard(lo, hi, args.h, args.square)
    if args.grid == "full":
        return GridSet.full(lo, hi, args.h)
    raise DomainError("give --mask or --grid")


def cmd_pinned(args) -> int:
    E = _grid(args)
    body = _body(args, E.dimension)
    L = np.arange(args.L_min, args.L_max + 0.5 * args.L_step, args.L_step)
    if args.refine is None:
        rep = pinned_distance_coverage(E, args.pin, body, L)
    else:
        rep = refinement_coverage(E, args.pin, body, args.refine, args.trials, args.seed, L)
    rows = zip(rep.L_values, rep.covered, rep.witness_count)
    _emit(_csv(["L", "covered", "witness_count"], rows), args.out)
    if rep.pin_outside:
        sys.stderr.write("warning: pin lies outside the grid box\n")
    return 0


def cmd_gen(args) -> int:
    if args.lattice:
        d, spacing, extent = args.lattice
        A = lattice(int(d), spacing, extent)
    elif args.progression:
        d, step, offset, count = args.progression
        A = progression_line_set(int(d), step, offset, int(count))
    elif args.bessel_zeros:
        d, count = args.bessel_zeros
        A = bessel_zero_line_set(d, count)
    else:
        raise DomainError("choose --lattice, --progression or --bessel-zeros")
    if args.perturb:
        A = perturb(A, args.perturb, args.seed)
    if args.out is None or args.out == "-":
        tmp = io.StringIO()
        tmp.write(f"dim {A.dimension}\n")
        for p in A.points:
            tmp.write(" ".join(repr(float(c)) for c in p) + "\n")
        sys.stdout.write(tmp.getvalue())
    else:
        save_points(A, args.out)
    return 0


def cmd_coarea(args) -> int:
    body = _body(args)
    k = args.power
    val = coarea_shell_integral(body, lambda t: t ** k, args.A, args.B)
    doc = {"body": body.to_spec(), "A": args.A, "B": args.B, "power": k, "value": val}
    validate_output("coarea", doc)
    _emit(_json(doc), args.out)
    return 0


def build_report(cfg) -> dict:
    A = cfg.build_pointset()
    an = cfg.analysis
    j_range = (an["j_min"], an["j_max"]) if "j_min" in an else None
    diag = frame_diagnostics(A, cfg.body, an["p"], an["pins"], j_range, an["delta"], an["shell"])
    profiles = [{
        "pin": i,
        "j": prof.j_values,
        "c_j": prof.c_values,
        "count": prof.counts,
        "sin_fraction": prof.sin_fraction,
    } for i, prof in zip(diag.pins, diag.profiles)]
    dens = diag.density
    doc = {
        "body": cfg.body.to_spec(),
        "n": len(A),
        "seed": cfg.seed,
        "analysis": dict(an, j_range=list(diag.j_range)),
        "profiles": profiles,
        "profile_summary": diag.summary,
        "density": {
            "radii": [] if dens is None else dens.radii,
            "counts": [] if dens is None else dens.counts,
            "densities": [] if dens is None else dens.densities,
            "trend": "flat" if dens is None else dens.trend,
        },
    }
    if an["gram"]:
        doc["riesz"] = riesz_report(A, cfg.body, tol=cfg.tol, diagnostics=diag).to_dict()
    if an["erdos"] and len(A) >= 2:
        doc["erdos"] = classify(A, cfg.body, an["residual_tol"], an["line_tol"], an["size_threshold"]).to_dict()
    doc = as_jsonable(doc)
    validate_output("report", doc)
    return doc


def cmd_report(args) -> int:
    cfg = load_config(args.config)
    if args.seed is not None:
        cfg = type(cfg)(**{**cfg.__dict__, "seed": args.seed})
    if args.tol is not None:
        cfg = type(cfg)(**{**cfg.__dict__, "tol": args.tol})
    doc = build_report(cfg)
    out = args.out if args.out is not None else cfg.output.get("json")
    if out is not None and args.out is None and not Path(out).is_absolute():
        out = str(cfg.base_dir / out)
    _emit(_json(doc), out)
    csv_path = cfg.output.get("profile_csv")
    if csv_path:
        rows = [(p["pin"], j, n, c, f) for p in doc["profiles"]
                for j, c, n, f in zip(p["j"], p["c_j"], p["count"], p["sin_fraction"])]
        path = Path(csv_path)
        _emit(_csv(["pin_index", "j", "count", "c_j", "sin_fraction"], rows),
              str(path if path.is_absolute() else cfg.base_dir / path))
    return 0


# -- parser ------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="RNG seed (default 0)")
    common.add_argument("--tol", type=float, default=None, help="numerical tolerance override")
    common.add_argument("--out", "-o", default=None, help="output path (default stdout)")

    parser = argparse.ArgumentParser(prog="frameslab", description="Exponential frame diagnostics for balls and ellipsoids.")
    sub = parser.add_subparsers(dest="command", required=True, metavar="{" + ",".join(COMMANDS) + "}")

    p = sub.add_parser("ft", parents=[common], help="Fourier transform vs main term along a ray")
    _add_body(p, dim_required=True)
    p.add_argument("--rmin", type=float, default=4.0)
    p.add_argument("--rmax", type=float, default=64.0)
    p.add_argument("--samples", type=int, default=2001)
    p.add_argument("--direction", type=float, nargs="+")
    p.add_argument("--fit", action="store_true", help="also report the fitted amplitude on stderr")
    p.set_defaults(func=cmd_ft)

    def with_points(p):
        p.add_argument("--points", required=True, help="point file ('dim d' header)")
        _add_body(p)
        p.add_argument("--pin", type=int, action="append", help="pin index (repeatable; default 0)")
        p.add_argument("--p", type=float, default=DEFAULT_P)
        p.add_argument("--delta", type=float, default=DEFAULT_DELTA)
        p.add_argument("--j-min", type=int)
        p.add_argument("--j-max", type=int)

    p = sub.add_parser("profile", parents=[common], help="empirical c_j per pin and scale")
    with_points(p)
    p.add_argument("--shell", choices=("euclidean", "rho"), default="euclidean")
    p.add_argument("--summary", help="write the profile summary JSON here")
    p.set_defaults(func=cmd_profile)

    p = sub.add_parser("gram", parents=[common], help="Gram spectrum and frame verdict")
    with_points(p)
    p.add_argument("--matrix", help="dump the Gram matrix as CSV")
    p.set_defaults(func=cmd_gram)

    p = sub.add_parser("erdos", parents=[common], help="near-integer distance residuals")
    p.add_argument("--points", required=True)
    _add_body(p)
    p.add_argument("--c1", type=float)
    p.add_argument("--c2", type=float)
    p.add_argument("--line-tol", type=float, default=1e-9)
    p.add_argument("--size-threshold", type=int, default=3)
    p.add_argument("--csv", help="per-pair residual CSV")
    p.set_defaults(func=cmd_erdos)

    p = sub.add_parser("pinned", parents=[common], help="pinned distance coverage")
    p.add_argument("--mask", help="P1 mask file")
    p.add_argument("--grid", choices=("checkerboard", "full"))
    p.add_argument("--box", type=float, nargs=4, default=[0.0, 0.0, 100.0, 100.0],
                   metavar=("X0", "Y0", "X1", "Y1"))
    p.add_argument("--h", type=float, default=0.25)
    p.add_argument("--square", type=float, default=1.0)
    p.add_argument("--pin", type=float, nargs="+", required=True)
    p.add_argument("--L-min", type=float, default=2.0)
    p.add_argument("--L-max", type=float, default=40.0)
    p.add_argument("--L-step", type=float, default=0.25)
    p.add_argument("--refine", type=float, help="keep fraction r of cells")
    p.add_argument("--trials", type=int, default=20)
    _add_body(p)
    p.set_defaults(func=cmd_pinned)

    p = sub.add_parser("gen", parents=[common], help="generate a point file")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--lattice", type=float, nargs=3, metavar=("D", "SPACING", "EXTENT"))
    g.add_argument("--progression", type=float, nargs=4, metavar=("D", "STEP", "OFFSET", "COUNT"))
    g.add_argument("--bessel-zeros", type=int, nargs=2, metavar=("D", "COUNT"))
    p.add_argument("--perturb", type=float, help="displacement bound")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("coarea", parents=[common], help="shell integral of t^power over A <= rho* <= B")
    _add_body(p, dim_required=True)
    p.add_argument("--A", type=float, default=1.0)
    p.add_argument("--B", type=float, default=2.0)
    p.add_argument("--power", type=float, default=0.0)
    p.set_defaults(func=cmd_coarea)

    p = sub.add_parser("report", parents=[common], help="combined report from a JSON config")
    p.add_argument("--config", required=True)
    p.set_defaults(func=cmd_report)
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    threads = os.environ.get("FRAMESLAB_THREADS")
    if threads:
        _accel.set_threads(int(threads))
    if args.command != "report" and args.seed is None:
        args.seed = 0
    if args.command in ("gram",) and args.tol is None:
        args.tol = 1e-10
    if getattr(args, "pin", None) is None and args.command in ("profile", "gram"):
        args.pin = [0]
    try:
        return args.func(args)
    except (ParseError, DomainError, ResourceError, OSError) as exc:
        sys.stderr.write(f"frameslab {args.command}: {exc}\n")
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":  # pragma: no cover
    main()
