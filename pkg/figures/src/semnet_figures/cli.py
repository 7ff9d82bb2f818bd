"""Command line wrapper: semnet-figures plot --spec <file>."""
from __future__ import annotations

import argparse
import sys

from .core import FigureError, load_figure_spec, render

EXIT_OK = 0
EXIT_CONFIG = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="semnet-figures")
    sub = parser.add_subparsers(dest="command", required=True)
    plot = sub.add_parser("plot", help="render a figure from sweep result CSVs")
    plot.add_argument("--spec", required=True, help="figure spec YAML")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    spec = load_figure_spec(args.spec)
    result = render(spec)
    print(f"wrote {len(result.series)} series to {result.output}")
    return EXIT_OK


def entry(argv=None) -> int:
    try:
        return main(argv)
    except (FigureError, FileNotFoundError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(entry())
