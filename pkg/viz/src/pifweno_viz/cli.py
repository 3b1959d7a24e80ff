"""viz: render figures and reports from pifweno output files.

    viz profiles <snapshot> [--reference SNAP] [--quantities q1,q2]
                 [--slice-y Y] [--out DIR]
    viz contours <snapshot> [--quantity NAME] [--levels LO:HI:N] [--out DIR]
    viz convergence <table> [--out DIR]

Exit codes: 0 success, 2 usage/format error.
"""

from __future__ import annotations

import argparse
import os
import sys

from pifweno_viz.plots import plot_contours, plot_profiles, report_convergence
from pifweno_viz.snapshots import FormatError, read_snapshot


def _parse_levels(text):
    parts = text.split(":")
    if len(parts) != 3:
        raise FormatError("levels spec must be LO:HI:COUNT")
    try:
        return float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise FormatError(f"bad levels spec {text!r}") from None


def _build_parser():
    parser = argparse.ArgumentParser(prog="viz", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("profiles")
    p.add_argument("snapshot")
    p.add_argument("--reference", help="snapshot drawn as the reference curve")
    p.add_argument("--quantities", default="rho,pressure,velocity_x")
    p.add_argument("--slice-y", type=float, default=None, help="2D slice ordinate")
    p.add_argument("--out", default=".")

    p = sub.add_parser("contours")
    p.add_argument("snapshot")
    p.add_argument("--quantity", default="rho")
    p.add_argument("--levels", help="LO:HI:COUNT (defaults exist for rho/pressure)")
    p.add_argument("--out", default=".")

    p = sub.add_parser("convergence")
    p.add_argument("table")
    p.add_argument("--out", default=".")
    return parser


def main(argv=None):
    args = _build_parser().parse_args(argv)
    try:
        os.makedirs(args.out, exist_ok=True)
        if args.command == "profiles":
            snap = read_snapshot(args.snapshot)
            ref = read_snapshot(args.reference) if args.reference else None
            quantities = [q.strip() for q in args.quantities.split(",") if q.strip()]
            paths = plot_profiles(snap, quantities, args.out, reference=ref, slice_y=args.slice_y)
            for path in paths:
                print(path)
        elif args.command == "contours":
            snap = read_snapshot(args.snapshot)
            levels = _parse_levels(args.levels) if args.levels else None
            print(plot_contours(snap, args.quantity, args.out, levels=levels))
        else:
            txt, png, slopes = report_convergence(args.table, args.out)
            print(txt)
            print(png)
        return 0
    except (FormatError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
