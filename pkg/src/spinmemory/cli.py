"""Command-line harness.

Subcommands: sweep-gamma, sweep-field-error, operating-point, invariants.
Exit codes: 0 success, 1 invariant failure, 2 configuration error.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

from .config import load_config
from .exceptions import ConfigError, SpinMemoryError
from .sweeps import (SweepSpec, run_field_error_sweep, run_gamma_sweep,
                     run_invariant_suite, run_operating_point_report,
                     write_rows)


def _add_common(parser):
    parser.add_argument("--config", type=Path, default=None,
                        help="flat key-value configuration file")
    parser.add_argument("--out", type=Path, default=None, help="output CSV path")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--points", type=int, default=61,
                        help="sweep grid points (log grid, 1e-3..1e2)")
    parser.add_argument("--no-plot", action="store_true",
                        help="skip rendering the PNG next to the CSV")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="spinmemory",
        description="Squeezing-transfer model: sweeps, operating point, invariants")
    sub = parser.add_subparsers(dest="command", required=True)

    for name, text in (("sweep-gamma", "variance curves vs pump ratio"),
                       ("sweep-field-error", "best variance vs pump ratio per field error"),
                       ("operating-point", "matched field and timing report"),
                       ("invariants", "random-draw physical invariant suite")):
        p = sub.add_parser(name, help=text)
        _add_common(p)
        if name == "sweep-field-error":
            p.add_argument("--db-over-b", default="0,1e-4,4e-4",
                           help="comma-separated relative field errors")
    return parser


def _entries(args):
    return load_config(args.config) if args.config else {}


def _maybe_plot(args, rows, kind, entries):
    if args.no_plot or args.out is None:
        return
    from . import plots
    png = args.out.with_suffix(".png")
    if kind == "gamma":
        from .config import resolve_config
        floor = math.exp(-2.0 * resolve_config(entries)["r_squeeze"])
        plots.plot_gamma_sweep(rows, png, squeeze_floor=floor)
    else:
        plots.plot_field_error_sweep(rows, png)
    print(f"wrote {png}")


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        entries = _entries(args)
        if args.command == "sweep-gamma":
            spec = SweepSpec(points=args.points, fixed=entries)
            rows = run_gamma_sweep(spec)
            if args.out:
                write_rows(rows, args.out)
                print(f"wrote {args.out}")
            _maybe_plot(args, rows, "gamma", entries)
        elif args.command == "sweep-field-error":
            try:
                db_values = tuple(float(v) for v in args.db_over_b.split(","))
            except ValueError as exc:
                raise ConfigError(f"bad --db-over-b list: {args.db_over_b!r}") from exc
            spec = SweepSpec(kind="field_error", points=args.points, fixed=entries)
            rows = run_field_error_sweep(spec, db_values)
            if args.out:
                write_rows(rows, args.out)
                print(f"wrote {args.out}")
            _maybe_plot(args, rows, "field", entries)
        elif args.command == "operating-point":
            report = run_operating_point_report(entries)
            print(report.text())
            if args.out:
                args.out.write_text(report.csv())
                print(f"wrote {args.out}")
        elif args.command == "invariants":
            report = run_invariant_suite(entries, seed=args.seed)
            print(report.text())
            if not report.passed:
                return 1
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except SpinMemoryError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
