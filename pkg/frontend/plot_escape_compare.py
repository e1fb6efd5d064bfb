#!/usr/bin/env python3
"""Paired D and escape-rate step functions from one escape-scan CSV."""

import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent))
from figlib import FigureSpec, render


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--csv", required=True, help="escape-scan CSV")
    parser.add_argument("--out", required=True)
    args = parser.parse_args(argv)
    render(FigureSpec("escape-compare", {"scan": args.csv}, Path(args.out)))
    return 0


if __name__ == "__main__":
    sys.exit(main())
