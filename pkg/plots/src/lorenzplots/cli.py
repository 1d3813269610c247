"""Command-line figure renderer for toolkit CSV outputs."""

from __future__ import annotations

import argparse
import sys

from .render import FIGURE_KINDS, FigureSpec, PlotInputError, render


def _pair(text: str) -> tuple[float, float]:
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected 'lo,hi', got {text!r}")
    return float(parts[0]), float(parts[1])


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="lorenz-plot",
        description="Render figures from lorenzlab CSV outputs")
    ap.add_argument("--kind", required=True, choices=sorted(FIGURE_KINDS))
    ap.add_argument("--in", required=True, dest="input", metavar="CSV")
    ap.add_argument("--out", required=True, metavar="IMG")
    ap.add_argument("--title", default=None)
    ap.add_argument("--xlim", type=_pair, default=None)
    ap.add_argument("--ylim", type=_pair, default=None)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    spec = FigureSpec(inputs=(args.input,), kind=args.kind, out=args.out,
                      title=args.title, xlim=args.xlim, ylim=args.ylim)
    try:
        render(spec)
    except PlotInputError as err:
        print(f"plot error: {err}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
