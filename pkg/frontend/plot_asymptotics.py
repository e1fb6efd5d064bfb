#!/usr/bin/env python3
"""Log-log D(h) with J*h asymptote overlays (scan-size CSVs).

--panel points: several limit points, dashed asymptote per series.
--panel fixed-left: one series with its extremum rows marked by squares and
dashed reference slopes 5/3, 1, 1/3 for the running/random-walk/standing
regimes.
"""

import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent))
from figlib import FigureSpec, render
from plot_phi import parse_curve


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument(
        "--curve", type=parse_curve, action="append", required=True,
        metavar="LABEL=PATH",
    )
    parser.add_argument("--panel", choices=("points", "fixed-left"), default="points")
    parser.add_argument("--out", required=True)
    args = parser.parse_args(argv)
    options = {"title": "small-hole asymptotics"}
    if args.panel == "fixed-left":
        options = {
            "title": "hole with fixed left boundary",
            "mark_extrema": True,
            "guides": [(5.0 / 3.0, "--"), (1.0, "--"), (1.0 / 3.0, "--")],
        }
    render(FigureSpec("asymptotics", {"curves": args.curve}, Path(args.out), options))
    return 0


if __name__ == "__main__":
    sys.exit(main())
