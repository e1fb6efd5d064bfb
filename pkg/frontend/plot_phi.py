#!/usr/bin/env python3
"""Layered curves of the cumulative deviation integral for several s."""

import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent))
from figlib import FigureSpec, render


def parse_curve(text: str):
    label, _, path = text.rpartition("=")
    if not label:
        raise argparse.ArgumentTypeError("expected LABEL=PATH")
    return label, path


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument(
        "--curve", type=parse_curve, action="append", required=True,
        metavar="LABEL=PATH", help="phi CSV with its legend label; repeatable",
    )
    parser.add_argument("--out", required=True)
    parser.add_argument("--xmin", type=float)
    parser.add_argument("--xmax", type=float)
    args = parser.parse_args(argv)
    options = {}
    if args.xmin is not None and args.xmax is not None:
        options["xlim"] = (args.xmin, args.xmax)
    render(FigureSpec("phi", {"curves": args.curve}, Path(args.out), options))
    return 0


if __name__ == "__main__":
    sys.exit(main())
