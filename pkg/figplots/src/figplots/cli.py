"""Command-line entry point: `figplots render --csv f.csv --fig 3 --out f.png`."""

from __future__ import annotations

import argparse
import sys

from .figures import RenderError, render


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="figplots", description="Render paper-figure layouts from sweep CSVs."
    )
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("render", help="render one figure from a CSV")
    p.add_argument("--csv", required=True, help="sweep CSV produced by the negtemp CLI")
    p.add_argument("--fig", type=int, required=True, choices=range(1, 8))
    p.add_argument("--out", required=True, help="output image path (.png)")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        out = render(args.csv, args.fig, args.out)
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except RenderError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
