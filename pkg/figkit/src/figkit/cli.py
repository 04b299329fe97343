"""Batch renderer: sweep CSV in, image file out."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .figures import FigureKind, FigureSpec, render
from .schema import SchemaError


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="figkit",
        description="Render rate-coverage sweep CSVs to line figures with optimum markers.",
    )
    parser.add_argument("--csv", type=Path, required=True, help="sweep CSV file")
    parser.add_argument(
        "--kind",
        choices=[k.value for k in FigureKind],
        required=True,
        help="figure family",
    )
    parser.add_argument("--out", type=Path, required=True, help="output image path (by extension: png, pdf, svg)")
    parser.add_argument("--no-stars", action="store_true", help="do not mark the per-curve optimum")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    spec = FigureSpec(
        csv_path=args.csv,
        kind=FigureKind(args.kind),
        out_path=args.out,
        mark_optimum=not args.no_stars,
    )
    try:
        render(spec)
    except (SchemaError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(f"wrote {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
