"""Command-line interface.

Subcommands::

    compute        magnitude + weighting of a space read from a file
    function       sample the magnitude function over a scale grid
    singularities  locate zeros of det zeta_{tA} in an interval
    dimension      growth-exponent fit of a space or region
    approx         monotone grid approximation of a compact region
    verify         run a named verification suite
    plotdata       two-column CSV for the bundled example curves

Results are wrapped in an envelope (version, config echo, timing, payload,
warnings) printed as JSON on stdout; ``--out`` writes the payload alone in
the chosen format, so payload files are byte-stable for a fixed config
regardless of ``--threads``.

Exit codes: 0 success, 2 parse error, 3 singular space under ``--strict``,
4 verification failure.
"""

from __future__ import annotations

import argparse
import math
import sys
import time

from . import __version__, compact, engine, function, io_formats, verify
from .errors import MagnitudeError, ParseError
from .spaces import from_points, scale

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_SINGULAR = 3
EXIT_VERIFY = 4


def _parse_grid(spec: str):
    """Grid spec t0:t1:steps[:log] -> array of scales."""
    parts = spec.split(":")
    if len(parts) not in (3, 4):
        raise ParseError(f"bad grid spec {spec!r}, expected t0:t1:steps[:log]")
    try:
        t0, t1, steps = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise ParseError(f"bad grid spec {spec!r}: {exc}") from exc
    log = len(parts) == 4 and parts[3] == "log"
    if len(parts) == 4 and parts[3] not in ("log", "linear"):
        raise ParseError(f"grid kind must be 'log' or 'linear', got {parts[3]!r}")
    return function.make_grid(t0, t1, steps, log=log)


def _parse_p(text: str):
    if text == "inf":
        return math.inf
    if text in ("1", "2"):
        return int(text)
    raise ParseError(f"--p must be 1, 2 or inf, got {text!r}")


def _parse_resolutions(text: str):
    try:
        vals = [float(tok) for tok in text.split(",") if tok.strip()]
    except ValueError as exc:
        raise ParseError(f"bad resolution list {text!r}") from exc
    if not vals:
        raise ParseError("resolution list is empty")
    return vals


def _envelope(args, payload, warnings, elapsed):
    return {
        "version": __version__,
        "command": args.command,
        "config": {k: v for k, v in sorted(vars(args).items())
                   if k != "func" and v is not None},
        "elapsed_s": elapsed,
        "payload": payload,
        "warnings": warnings,
    }


def _write_output(args, payload_json, payload_csv, warnings, elapsed):
    text_payload = payload_csv if args.format_out == "csv" else \
        io_formats.dumps_json(payload_json) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text_payload)
    envelope = _envelope(args, payload_json, warnings, elapsed)
    sys.stdout.write(io_formats.dumps_json(envelope) + "\n")


def _collect_warnings(result) -> list:
    warnings = []
    diags = result.diagnostics
    if diags.get("low_confidence"):
        warnings.append("low-confidence: similarity matrix near the "
                        f"singularity threshold (rcond {diags.get('rcond'):.3g})")
    if result.status == engine.STATUS_SINGULAR_CONSISTENT:
        warnings.append("similarity matrix singular; magnitude from a "
                        "consistent least-squares weighting")
    if result.status == engine.STATUS_SINGULAR_NO_WEIGHTING:
        warnings.append("no weighting exists: magnitude undefined")
    return warnings


# --------------------------------------------------------------------------
# subcommands
# --------------------------------------------------------------------------

def cmd_compute(args) -> int:
    space = io_formats.load_space(args.input, args.format, p=args.p,
                                  default_length=args.edge_length)
    if args.scale is not None:
        space = scale(space, args.scale)
    t0 = time.perf_counter()
    result = engine.magnitude(space)
    elapsed = time.perf_counter() - t0
    warnings = _collect_warnings(result)
    _write_output(args, io_formats.result_payload(space, result),
                  io_formats.result_csv(space, result), warnings, elapsed)
    if args.strict and result.status == engine.STATUS_SINGULAR_NO_WEIGHTING:
        return EXIT_SINGULAR
    return EXIT_OK


def cmd_function(args) -> int:
    space = io_formats.load_space(args.input, args.format, p=args.p,
                                  default_length=args.edge_length)
    grid = _parse_grid(args.grid)
    t0 = time.perf_counter()
    profile = function.sample_function(space, grid, threads=args.threads)
    warnings = []
    if len(space) <= 600:
        scan = function.find_singularities(
            space, (float(grid.min()), float(grid.max())))
        profile = profile.with_singularities(scan)
        for suspect in scan.suspects:
            warnings.append(f"possible even-order singularity near t={suspect:.6g}")
    else:
        warnings.append("singularity scan skipped for spaces over 600 points")
    elapsed = time.perf_counter() - t0
    n_undef = sum(1 for s in profile.samples if s.magnitude is None)
    if n_undef:
        warnings.append(f"{n_undef} undefined sample(s) in the profile")
    _write_output(args, io_formats.profile_payload(profile),
                  io_formats.profile_csv(profile), warnings, elapsed)
    return EXIT_OK


def cmd_singularities(args) -> int:
    space = io_formats.load_space(args.input, args.format, p=args.p,
                                  default_length=args.edge_length)
    grid = _parse_grid(args.grid)
    t0 = time.perf_counter()
    scan = function.find_singularities(space, (float(grid.min()),
                                               float(grid.max())))
    elapsed = time.perf_counter() - t0
    payload = {
        "interval": list(scan.interval),
        "roots": [{"t": r.t, "width": r.width} for r in scan.roots],
        "suspects": list(scan.suspects),
    }
    csv_text = io_formats.emit_csv(
        ("t", "width"), [(r.t, r.width) for r in scan.roots],
        trailing=[f"suspect: t={io_formats.fmt(s)}" for s in scan.suspects])
    _write_output(args, payload, csv_text, [], elapsed)
    return EXIT_OK


def cmd_dimension(args) -> int:
    t0 = time.perf_counter()
    warnings = []
    if args.format == "region":
        region = io_formats.load_region(args.input)
        grid = _parse_grid(args.grid or "1:1e5:160:log")
        closed = [compact.closed_form_magnitude(region, t) for t in grid]
        if all(v is not None for v in closed):
            pairs = list(zip(grid, closed))
        else:
            deltas = _parse_resolutions(args.resolutions or "0.0625")
            space = from_points(region.grid_points(min(deltas)), p=region.p)
            grid = _parse_grid(args.grid or "1:20:16:log")
            prof = function.sample_function(space, grid, threads=args.threads,
                                            diagnostics=False)
            pairs = prof
            warnings.append(
                f"region has no closed form: fitted the delta={min(deltas):g} "
                "grid approximation (lower estimate)")
        fit = function.dimension_estimate(pairs)
    else:
        space = io_formats.load_space(args.input, args.format, p=args.p,
                                      default_length=args.edge_length)
        grid = _parse_grid(args.grid or "0.5:5e4:96:log")
        prof = function.sample_function(space, grid, threads=args.threads)
        fit = function.dimension_estimate(prof)
    elapsed = time.perf_counter() - t0
    payload = {
        "exponent": fit.exponent,
        "window": {"t_lo": fit.window[0], "t_hi": fit.window[1]},
        "residual": fit.residual,
        "n_samples": fit.n_samples,
    }
    csv_text = io_formats.emit_csv(
        ("exponent", "t_lo", "t_hi", "residual", "n_samples"),
        [(fit.exponent, fit.window[0], fit.window[1], fit.residual,
          fit.n_samples)])
    _write_output(args, payload, csv_text, warnings, elapsed)
    return EXIT_OK


def cmd_approx(args) -> int:
    region = io_formats.load_region(args.input)
    t = args.scale if args.scale is not None else 1.0
    deltas = _parse_resolutions(args.resolutions or "1,0.5,0.25,0.125,0.0625")
    t0 = time.perf_counter()
    report = compact.grid_approximate(region, t, deltas, cap=args.grid_cap,
                                      threads=args.threads)
    try:
        conj = compact.conjecture_rhs(region, region.p, t)
    except MagnitudeError:
        conj = None
    elapsed = time.perf_counter() - t0
    warnings = []
    if not report.monotone:
        warnings.append("grid magnitudes are not monotone; check nesting")
    _write_output(args, io_formats.report_payload(report, conj),
                  io_formats.report_csv(report, conj), warnings, elapsed)
    return EXIT_OK


def cmd_verify(args) -> int:
    t0 = time.perf_counter()
    try:
        results = verify.run_suite(args.suite)
    except KeyError as exc:
        sys.stderr.write(f"error: {exc.args[0]}\n")
        return EXIT_PARSE
    elapsed = time.perf_counter() - t0
    for res in results:
        sys.stdout.write(res.line() + "\n")
    n_hard = sum(1 for r in results if r.hard_failure)
    n_soft = sum(1 for r in results if (not r.passed) and r.soft)
    sys.stdout.write(
        f"# {len(results)} checks, {n_hard} failures, {n_soft} soft warnings, "
        f"{elapsed:.1f}s\n")
    if args.out:
        payload = {
            "suite": args.suite,
            "checks": [{"name": r.name, "passed": r.passed, "soft": r.soft,
                        "detail": r.detail} for r in results],
        }
        with open(args.out, "w") as fh:
            fh.write(io_formats.dumps_json(payload) + "\n")
    return EXIT_VERIFY if n_hard else EXIT_OK


PLOT_TARGETS = ("two-point", "k32")


def cmd_plotdata(args) -> int:
    t0 = time.perf_counter()
    if args.target == "two-point":
        space = io_formats.read_distance_csv("0,1\n1,0")
        grid = _parse_grid(args.grid or "0.01:5:200")
    elif args.target == "k32":
        space = verify.bipartite_graph(3, 2)
        grid = _parse_grid(args.grid or "0.05:4:400")
    else:
        raise ParseError(f"unknown plot target {args.target!r}; "
                         f"known: {PLOT_TARGETS}")
    profile = function.sample_function(space, grid, threads=args.threads)
    rows = [(s.t, s.magnitude) for s in profile.samples]
    csv_text = io_formats.emit_csv(("t", "magnitude"), rows)
    elapsed = time.perf_counter() - t0
    payload = {"target": args.target,
               "rows": [{"t": t, "magnitude": m} for t, m in rows]}
    _write_output(args, payload, csv_text, [], elapsed)
    return EXIT_OK


# --------------------------------------------------------------------------
# argument parsing
# --------------------------------------------------------------------------

def _add_input_opts(sub, region_ok=False):
    formats = ["dist", "points", "graph", "poset"]
    if region_ok:
        formats.append("region")
    sub.add_argument("--input", required=True, help="input file path")
    sub.add_argument("--format", required=True, choices=formats,
                     help="input file format")
    sub.add_argument("--p", type=_parse_p, default=2,
                     help="p-norm for point clouds: 1, 2 or inf (default 2)")
    sub.add_argument("--edge-length", type=float, default=1.0,
                     help="default edge length for graph input (default 1)")


def _add_common_opts(sub):
    sub.add_argument("--out", help="write the payload to this file")
    sub.add_argument("--format-out", choices=["csv", "json"], default="csv",
                     help="payload format for --out (default csv)")
    sub.add_argument("--threads", type=int, default=1,
                     help="worker threads for independent cells (default 1)")
    sub.add_argument("--tol-rcond", type=float, default=None,
                     help="override the similarity singularity threshold")
    sub.add_argument("--tol-residual", type=float, default=None,
                     help="override the consistency residual factor")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="magnitude",
        description="Magnitude of finite metric spaces and compact regions")
    parser.add_argument("--version", action="version", version=__version__)
    subs = parser.add_subparsers(dest="command", required=True)

    sub = subs.add_parser("compute", help="magnitude of a space")
    _add_input_opts(sub)
    sub.add_argument("--scale", type=float, help="rescale distances by t first")
    sub.add_argument("--strict", action="store_true",
                     help="exit 3 when no weighting exists")
    _add_common_opts(sub)
    sub.set_defaults(func=cmd_compute)

    sub = subs.add_parser("function", help="sample the magnitude function")
    _add_input_opts(sub)
    sub.add_argument("--grid", required=True, help="t0:t1:steps[:log]")
    _add_common_opts(sub)
    sub.set_defaults(func=cmd_function)

    sub = subs.add_parser("singularities", help="zeros of det zeta_{tA}")
    _add_input_opts(sub)
    sub.add_argument("--grid", required=True,
                     help="t0:t1:steps[:log] (steps ignored; interval used)")
    _add_common_opts(sub)
    sub.set_defaults(func=cmd_singularities)

    sub = subs.add_parser("dimension", help="growth-exponent estimate")
    _add_input_opts(sub, region_ok=True)
    sub.add_argument("--grid", help="t0:t1:steps[:log] sampling grid")
    sub.add_argument("--resolutions", help="comma list of grid spacings")
    _add_common_opts(sub)
    sub.set_defaults(func=cmd_dimension)

    sub = subs.add_parser("approx", help="monotone grid approximation")
    sub.add_argument("--input", required=True, help="RegionSpec JSON file")
    sub.add_argument("--format", choices=["region"], default="region")
    sub.add_argument("--scale", type=float, help="scale factor t (default 1)")
    sub.add_argument("--resolutions",
                     help="comma list of spacings, descending by integer factors")
    sub.add_argument("--grid-cap", type=int, default=compact.DEFAULT_GRID_CAP,
                     help="maximum grid point count (default 20000)")
    _add_common_opts(sub)
    sub.set_defaults(func=cmd_approx)

    sub = subs.add_parser("verify", help="run a verification suite")
    sub.add_argument("suite", nargs="?", default="all",
                     help="suite name or 'all' (default)")
    sub.add_argument("--out", help="write a JSON report here")
    sub.set_defaults(func=cmd_verify)

    sub = subs.add_parser("plotdata", help="two-column CSV for example curves")
    sub.add_argument("--target", required=True, choices=PLOT_TARGETS)
    sub.add_argument("--grid", help="t0:t1:steps[:log] override")
    _add_common_opts(sub)
    sub.set_defaults(func=cmd_plotdata)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "tol_rcond", None) is not None:
        engine.RCOND_SINGULAR = args.tol_rcond
    if getattr(args, "tol_residual", None) is not None:
        engine.RESIDUAL_FACTOR = args.tol_residual
    try:
        return args.func(args)
    except ParseError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_PARSE
    except MagnitudeError as exc:
        sys.stderr.write(f"error: {exc.__class__.__name__}: {exc}\n")
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
