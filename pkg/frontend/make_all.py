#!/usr/bin/env python3
"""Generate all figure CSVs through the holediff CLI, then render the
figures: position step function, layered Phi curves, both asymptotics
panels, and the D-versus-escape comparison.

--quick trims the data sizes (smaller s, shorter size grids) for smoke
runs; the default reproduces the full-scale figures.
"""

import argparse
import shutil
import subprocess
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent))
import plot_asymptotics
import plot_escape_compare
import plot_phi
import plot_positions

NONPERIODIC_POINT = "25867/59049"  # aperiodic for >= 1e4 iterations


def cli(*args: str) -> list[str]:
    exe = shutil.which("holediff")
    base = [exe] if exe else [sys.executable, "-m", "holediff.cli"]
    return base + list(args)


def generate(workdir: Path, quick: bool) -> dict:
    workdir.mkdir(parents=True, exist_ok=True)
    phi_levels = [2, 5, 8, 12] if quick else [2, 5, 8, 20]
    size_range = "4:10" if quick else "4:14"
    escape_s = 8 if quick else 9
    jobs = {
        "positions": cli(
            "scan-positions", "--s", "6", "--out", str(workdir / "positions_s6.csv")
        ),
        "escape": cli(
            "escape", "--s", str(escape_s), "--out", str(workdir / "escape.csv")
        ),
        "size_standing": cli(
            "scan-size", "--point", "1/3", "--center", "--dyadic", size_range,
            "--out", str(workdir / "size_standing.csv"),
        ),
        "size_running": cli(
            "scan-size", "--point", "1/7", "--center", "--dyadic", size_range,
            "--out", str(workdir / "size_running.csv"),
        ),
        "size_nonperiodic": cli(
            "scan-size", "--point", NONPERIODIC_POINT, "--center", "--dyadic",
            size_range, "--out", str(workdir / "size_nonperiodic.csv"),
        ),
        "size_fixed_left": cli(
            "scan-size", "--point", "1/3", "--fix-left",
            "--h", ",".join(f"1/{n}" for n in range(6, 40)),
            "--dyadic", "6:12",
            "--out", str(workdir / "size_fixed_left.csv"),
        ),
    }
    for s in phi_levels:
        jobs[f"phi{s}"] = cli(
            "phi", "--s", str(s), "--out", str(workdir / f"phi_s{s}.csv")
        )
    for name, command in jobs.items():
        result = subprocess.run(command, capture_output=True, text=True)
        if result.returncode != 0:
            raise RuntimeError(f"{name} failed ({result.returncode}): {result.stderr}")
    return {"phi_levels": phi_levels}


def render_all(workdir: Path, fmt: str, meta: dict) -> list[Path]:
    out = []

    def done(path: str) -> Path:
        out.append(workdir / path)
        return out[-1]

    plot_positions.main(
        ["--csv", str(workdir / "positions_s6.csv"),
         "--out", str(done(f"fig_positions.{fmt}"))]
    )
    phi_args = []
    for s in meta["phi_levels"]:
        phi_args += ["--curve", f"s={s}={workdir / f'phi_s{s}.csv'}"]
    plot_phi.main(phi_args + ["--out", str(done(f"fig_phi.{fmt}"))])
    plot_asymptotics.main(
        ["--curve", f"1/3 (standing)={workdir / 'size_standing.csv'}",
         "--curve", f"non-periodic={workdir / 'size_nonperiodic.csv'}",
         "--curve", f"1/7 (running)={workdir / 'size_running.csv'}",
         "--panel", "points", "--out", str(done(f"fig_asymptotics.{fmt}"))]
    )
    plot_asymptotics.main(
        ["--curve", f"a1 = 1/3 fixed={workdir / 'size_fixed_left.csv'}",
         "--panel", "fixed-left", "--out", str(done(f"fig_fixed_left.{fmt}"))]
    )
    plot_escape_compare.main(
        ["--csv", str(workdir / "escape.csv"),
         "--out", str(done(f"fig_escape_compare.{fmt}"))]
    )
    return out


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--workdir", default="figures", help="CSV and image directory")
    parser.add_argument("--format", choices=("svg", "png"), default="svg")
    parser.add_argument("--quick", action="store_true", help="smaller data sizes")
    args = parser.parse_args(argv)
    workdir = Path(args.workdir)
    meta = generate(workdir, args.quick)
    for path in render_all(workdir, args.format, meta):
        print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
