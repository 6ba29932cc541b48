"""``exflow`` command line entry point.

Exit codes: 0 ok, 2 validation error, 3 numeric failure, 4 io failure.
"""

from __future__ import annotations

import argparse
import sys

from .errors import ExflowError, NonFiniteState, StageError
from .ingest import BUILTINS, GridSpec, OuterApproxConfig, builtin_system
from .report import (
    analyze_graph,
    analyze_pipeline,
    load_graph_json,
    render_basins_ppm,
    write_report_json,
)

EXIT_OK, EXIT_VALIDATION, EXIT_NUMERIC, EXIT_IO = 0, 2, 3, 4


def _floats(text: str, count: int, what: str) -> list[float]:
    parts = text.split(",")
    if len(parts) != count:
        raise argparse.ArgumentTypeError(f"{what} needs {count} comma separated numbers")
    try:
        return [float(p) for p in parts]
    except ValueError:
        raise argparse.ArgumentTypeError(f"{what}: not a number in {text!r}")


def _grid(text: str) -> tuple[int, int]:
    parts = text.split(",")
    try:
        dims = [int(p) for p in parts]
    except ValueError:
        raise argparse.ArgumentTypeError(f"grid: not an integer in {text!r}")
    if len(dims) == 1:
        dims *= 2
    if len(dims) != 2:
        raise argparse.ArgumentTypeError("grid is N or N,M")
    return dims[0], dims[1]


def _param(text: str) -> tuple[str, float]:
    key, sep, value = text.partition("=")
    if not sep or not key:
        raise argparse.ArgumentTypeError(f"expected k=v, got {text!r}")
    try:
        return key, float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"parameter {key}: not a number: {value!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="exflow", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="analyze a builtin ODE system")
    a.add_argument("--system", required=True)
    a.add_argument("--param", action="append", type=_param, default=[], metavar="K=V")
    a.add_argument("--grid", type=_grid, help="coarsest cells per axis, N or N,M")
    a.add_argument("--box", type=lambda s: _floats(s, 4, "box"), metavar="X0,X1,Y0,Y1")
    a.add_argument("--tau", type=float)
    a.add_argument("--bloat", type=int, default=1)
    a.add_argument("--rk-steps", type=int, default=8)
    a.add_argument("--levels", type=int, default=1)
    a.add_argument("--reverse", action="store_true")
    a.add_argument("--out", required=True)
    a.add_argument("--render", metavar="B.ppm")
    a.add_argument("--timing", action="store_true", help="include wall times in the report")

    sub.add_parser("systems", help="list builtin systems")

    c = sub.add_parser("check", help="analyze a graph given as JSON")
    c.add_argument("--graph", required=True)
    c.add_argument("--out", required=True)
    c.add_argument("--reverse", action="store_true")
    c.add_argument("--timing", action="store_true")
    return parser


def _analyze(args) -> int:
    params = dict(args.param)
    _, default_grid = builtin_system(args.system, params)
    box = default_grid.box
    if args.box is not None:
        x0, x1, y0, y1 = args.box
        box = ((x0, x1), (y0, y1))
    grid = GridSpec(box, args.grid or default_grid.dims, default_grid.boundary)
    tau = args.tau if args.tau is not None else BUILTINS[args.system].tau
    cfg = OuterApproxConfig(tau=tau, rk_steps=args.rk_steps, bloat=args.bloat)
    report = analyze_pipeline(
        args.system, grid, cfg, levels=args.levels, reversed=args.reverse, params=params
    )
    write_report_json(report, args.out, include_timing=args.timing)
    if args.render:
        render_basins_ppm(report, report.basins, args.render)
    return EXIT_OK


def _check(args) -> int:
    g = load_graph_json(args.graph)
    report = analyze_graph(g, name=args.graph, reversed=args.reverse)
    write_report_json(report, args.out, include_timing=args.timing)
    return EXIT_OK


def _systems(args) -> int:
    for name, spec in sorted(BUILTINS.items()):
        params = ", ".join(f"{k}={v:g}" for k, v in spec.params.items()) or "-"
        (x0, x1), (y0, y1) = spec.box
        print(f"{name}")
        print(f"    {spec.summary}")
        print(
            f"    params: {params}; box [{x0:g},{x1:g}]x[{y0:g},{y1:g}]; "
            f"grid {spec.dims[0]}x{spec.dims[1]}; boundary {'/'.join(spec.boundary)}; tau {spec.tau:g}"
        )
    return EXIT_OK


def _exit_code(exc: BaseException) -> int:
    if isinstance(exc, StageError):
        exc = exc.cause
    if isinstance(exc, NonFiniteState):
        return EXIT_NUMERIC
    if isinstance(exc, OSError):
        return EXIT_IO
    return EXIT_VALIDATION


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handler = {"analyze": _analyze, "check": _check, "systems": _systems}[args.command]
    try:
        return handler(args)
    except (ExflowError, ValueError, ArithmeticError, OSError) as exc:
        print(f"exflow: error: {exc}", file=sys.stderr)
        return _exit_code(exc)


if __name__ == "__main__":
    sys.exit(main())
