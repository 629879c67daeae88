"""chiralwalk-plots command line: render figures from chiralwalk CSV files."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .render import KINDS, FigureSpec, SchemaError, render


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chiralwalk-plots", description="Figure rendering for chiralwalk output"
    )
    sub = parser.add_subparsers(dest="command", required=True)
    pr = sub.add_parser("render", help="render one figure from a CSV file")
    pr.add_argument("--kind", choices=KINDS, required=True)
    pr.add_argument("--in", dest="source", required=True, help="input CSV path")
    pr.add_argument("--out", required=True, help="output image path")
    pr.add_argument("--title", default=None)
    pr.add_argument("--dpi", type=int, default=150)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    spec = FigureSpec(
        kind=args.kind,
        source=Path(args.source),
        out=Path(args.out),
        title=args.title,
        dpi=args.dpi,
    )
    try:
        out = render(spec)
    except (SchemaError, FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(f"rendered {args.kind} figure -> {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
