"""Command line entry point: render one figure from one CSV."""

from __future__ import annotations

import argparse
import json
import sys

from .figure import FigureError, FigureSpec, render


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # raise instead of exiting so run() controls the exit code
    def error(self, message):
        raise _UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="render_figure",
        description="Scatter eigenvalues from a re,im CSV with the limiting "
                    "ellipse overlaid; prints a one-line JSON summary.",
    )
    parser.add_argument("--csv", required=True, help="input CSV (header re,im)")
    parser.add_argument("--rho", type=float, required=True,
                        help="entry correlation, in (-1, 1)")
    parser.add_argument("--out", required=True, help="output PNG path")
    parser.add_argument("--dilation", type=float, default=1.05,
                        help="scale of the dashed outer boundary and of the "
                             "reported inside fraction (default 1.05)")
    parser.add_argument("--point-size", type=float, default=2.0,
                        help="scatter marker size (default 2.0)")
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    try:
        spec = FigureSpec(csv_path=args.csv, rho=args.rho, out_path=args.out,
                          point_size=args.point_size, dilation=args.dilation)
        summary = render(spec)
    except FigureError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(json.dumps(summary, sort_keys=True))
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
