#!/usr/bin/env python3
"""Step-function figure: D versus hole position (one scan-positions CSV)."""

import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent))
from figlib import FigureSpec, render


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--csv", required=True, help="scan-positions CSV")
    parser.add_argument("--out", required=True, help="output image (svg/png)")
    parser.add_argument("--title", default="diffusion coefficient vs hole position")
    args = parser.parse_args(argv)
    render(
        FigureSpec(
            "positions", {"scan": args.csv}, Path(args.out), {"title": args.title}
        )
    )
    return 0


if __name__ == "__main__":
    sys.exit(main())
