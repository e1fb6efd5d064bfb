"""Command-line interface: exact scans, escape rates, simulations, and
periodic-orbit expansions as CSV/JSON tables.

Exit codes: 0 success, 2 invalid configuration or arguments, 3 numerical
non-convergence.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from .diffusion import ScanFamily, diffusion_coefficient, phi_cumulative, position_scan, scan_mean
from .escape import ConvergenceError, escape_rate, escape_scan, escape_scan_means
from .maps import ConfigError, MapKind, ModelConfig, Placement
from .orbits import LimitMode, asymptotic_scan, po_expansion
from .rational import float17, format_rational, parse_rational
from .records import ScanKind, ScanRecord, emit, exact_pair
from .simulate import estimate_D, estimate_escape, simulate_ensemble, simulate_survival


def _add_output_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--format", choices=("csv", "json"), default="csv")
    parser.add_argument("--out", default="-", help="output path, '-' for stdout")


def _add_config_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--map", choices=[k.value for k in MapKind], default="doubling")
    parser.add_argument(
        "--placement", choices=[p.value for p in Placement], default="symmetric"
    )
    for name in ("a1", "a2", "a3", "a4"):
        parser.add_argument(f"--{name}", help=f"hole endpoint {name} as 'p/q'")


def _build_config(args) -> ModelConfig:
    kind = MapKind(args.map)
    placement = Placement(args.placement)
    vals = {
        name: parse_rational(getattr(args, name))
        for name in ("a1", "a2", "a3", "a4")
        if getattr(args, name) is not None
    }
    if placement == Placement.SYMMETRIC:
        if "a1" not in vals or "a2" not in vals:
            raise ConfigError("symmetric placement needs --a1 and --a2")
        config = ModelConfig.symmetric(kind, vals["a1"], vals["a2"])
    elif placement == Placement.NONSYM_LEFT_AT_ZERO:
        if "a2" not in vals or "a3" not in vals:
            raise ConfigError("non-symmetric placement needs --a2 (= h) and --a3")
        config = ModelConfig.nonsymmetric(kind, vals["a3"], vals["a2"])
    else:
        if len(vals) != 4:
            raise ConfigError("general placement needs all of --a1 .. --a4")
        config = ModelConfig(kind, placement, vals["a1"], vals["a2"], vals["a3"], vals["a4"])
    for name, val in vals.items():
        if getattr(config, name) != val:
            raise ConfigError(f"{name}={val} conflicts with the placement constraints")
    return config


def _config_cols(config: ModelConfig) -> dict:
    return {name: format_rational(getattr(config, name)) for name in ("a1", "a2", "a3", "a4")}


def cmd_scan_positions(args) -> int:
    if not 1 <= args.s <= 20:
        raise ConfigError("exact position scans support 1 <= s <= 20")
    family = ScanFamily(
        ("symmetric-" if args.placement == "symmetric" else "nonsymmetric-") + args.map
    )
    rows = position_scan(family, args.s)
    records = []
    for row in rows:
        d, d_f = exact_pair(row.D)
        records.append(
            ScanRecord(
                ScanKind.POSITIONS,
                {"index": row.index, **_config_cols(row.config), "D": d, "D_float": d_f},
            )
        )
    mean = sum(r.D for r in rows) / len(rows)
    expected = scan_mean(family, args.s)
    if mean != expected:
        raise AssertionError(f"scan mean {mean} != exact law {expected}")
    m, m_f = exact_pair(mean)
    records.append(ScanRecord(ScanKind.POSITIONS, {"index": "mean", "D": m, "D_float": m_f}))
    summary = {"family": family.value, "s": args.s, "mean": m, "mean_float": m_f}
    emit(records, args.format, args.out, summary)
    return 0


def _parse_h_grid(args) -> list[Fraction]:
    grid: list[Fraction] = []
    if args.h:
        grid += [parse_rational(part) for part in args.h.split(",")]
    if args.dyadic:
        lo, hi = (int(part) for part in args.dyadic.split(":"))
        grid += [Fraction(1, 1 << s) for s in range(lo, hi + 1)]
    if not grid or any(h <= 0 for h in grid):
        raise ConfigError("need a grid of positive hole sizes (--h and/or --dyadic)")
    return sorted(set(grid), reverse=True)


def cmd_scan_size(args) -> int:
    point = parse_rational(args.point)
    if args.fix_left:
        mode = LimitMode.FIXED_LEFT
    elif args.fix_right:
        mode = LimitMode.FIXED_RIGHT
    else:
        mode = LimitMode.INTERIOR
    rows = asymptotic_scan(point, mode, _parse_h_grid(args))
    records = []
    for i, row in enumerate(rows):
        d, d_f = exact_pair(row.D)
        jh, jh_f = exact_pair(row.J_times_h)
        extremum = ""
        if 0 < i < len(rows) - 1:
            if row.D < rows[i - 1].D and row.D < rows[i + 1].D:
                extremum = "min"
            elif row.D > rows[i - 1].D and row.D > rows[i + 1].D:
                extremum = "max"
        a1 = point - row.h / 2 if mode == LimitMode.INTERIOR else (
            point if mode == LimitMode.FIXED_LEFT else point - row.h
        )
        records.append(
            ScanRecord(
                ScanKind.SIZES,
                {
                    "h": format_rational(row.h),
                    "a1": format_rational(a1),
                    "a2": format_rational(a1 + row.h),
                    "D": d,
                    "D_float": d_f,
                    "J_h": jh,
                    "J_h_float": jh_f,
                    "extremum": extremum,
                },
            )
        )
    summary = {"point": format_rational(point), "mode": mode.value}
    emit(records, args.format, args.out, summary)
    return 0


def cmd_phi(args) -> int:
    family = ScanFamily(args.variant)
    points = phi_cumulative(args.s, family)
    records = []
    for x, phi in points:
        p, p_f = exact_pair(phi)
        records.append(
            ScanRecord(
                ScanKind.PHI, {"x": format_rational(x), "phi": p, "phi_float": p_f}
            )
        )
    emit(records, args.format, args.out, {"variant": family.value, "s": args.s})
    return 0


def cmd_escape(args) -> int:
    d_rows = position_scan(ScanFamily("symmetric-" + args.map), args.s)
    e_rows = escape_scan(args.s, MapKind(args.map), args.tol)
    records = []
    for d_row, e_row in zip(d_rows, e_rows):
        d, d_f = exact_pair(d_row.D)
        res = e_row.result
        records.append(
            ScanRecord(
                ScanKind.ESCAPE,
                {
                    "index": e_row.index,
                    "a1": format_rational(e_row.config.a1),
                    "a2": format_rational(e_row.config.a2),
                    "D": d,
                    "D_float": d_f,
                    "nu": float17(res.nu),
                    "gamma": float17(res.gamma),
                    "iterations": res.iterations,
                    "residual": float17(res.residual),
                },
            )
        )
    means = escape_scan_means(e_rows)
    d_mean = sum(r.D for r in d_rows) / len(d_rows)
    dm, dm_f = exact_pair(d_mean)
    records.append(
        ScanRecord(
            ScanKind.ESCAPE,
            {
                "index": "mean_arithmetic",
                "D": dm,
                "D_float": dm_f,
                "gamma": float17(means["arithmetic_mean"]),
            },
        )
    )
    records.append(
        ScanRecord(
            ScanKind.ESCAPE,
            {"index": "reference_2h", "gamma": float17(means["two_h_reference"])},
        )
    )
    summary = {
        "s": args.s,
        "gamma_mean_arithmetic": means["arithmetic_mean"],
        "gamma_reference_2h": means["two_h_reference"],
        "D_mean": dm,
    }
    emit(records, args.format, args.out, summary)
    return 0


def cmd_simulate(args) -> int:
    config = _build_config(args)
    summary: dict = {"config": config.to_record(), "seed": args.seed}
    msd_series = None
    survival = None
    if args.observable in ("msd", "both"):
        msd_series = simulate_ensemble(config, args.particles, args.steps, args.seed)
        d_est, d_err = estimate_D(msd_series)
        summary.update(
            {
                "D_est": d_est,
                "D_stderr": d_err,
                "fit_points": len(msd_series.times) - len(msd_series.times) // 2,
            }
        )
    if args.observable in ("escape", "both") and config.h > 0:
        try:
            gamma, g_err, survival = estimate_escape(
                config, args.particles, args.steps, args.seed + 1, args.transient
            )
            summary.update({"gamma_est": gamma, "gamma_stderr": g_err})
        except ValueError as exc:
            summary["gamma_error"] = str(exc)
    records = []
    if msd_series is not None:
        lookup = None
        if survival is not None:
            lookup = dict(zip(survival.times.tolist(), survival.survivors.tolist()))
        for i, n in enumerate(msd_series.times):
            records.append(
                ScanRecord(
                    ScanKind.SIMULATION,
                    {
                        "n": int(n),
                        "msd": float17(msd_series.msd[i]),
                        "stderr": float17(msd_series.stderr[i]),
                        "survivors": "" if lookup is None else lookup.get(int(n), ""),
                    },
                )
            )
    elif survival is not None:
        for n, count in zip(survival.times.tolist(), survival.survivors.tolist()):
            records.append(
                ScanRecord(
                    ScanKind.SIMULATION,
                    {"n": n, "msd": "", "stderr": "", "survivors": count},
                )
            )
    emit(records, args.format, args.out, summary)
    return 0


def cmd_po_expansion(args) -> int:
    config = _build_config(args)
    result = po_expansion(config, args.pmax, args.ordering)
    records = []
    for term in result.terms:
        j, j_f = exact_pair(term.J)
        records.append(
            ScanRecord(
                ScanKind.PO_EXPANSION,
                {
                    "point": format_rational(term.point),
                    "class": term.orbit_class.value,
                    "period": term.period,
                    "J": j,
                    "J_float": j_f,
                },
            )
        )
    summary = {
        "p_max": result.p_max,
        "approx": format_rational(result.approx),
        "approx_float": float17(result.approx),
        "exact": format_rational(result.exact),
        "residual_float": float17(result.residual),
        "terms": len(result.terms),
    }
    emit(records, args.format, args.out, summary)
    return 0


def cmd_diffusion(args) -> int:
    config = _build_config(args)
    result = diffusion_coefficient(config)
    d, d_f = exact_pair(result.D)
    rw, rw_f = exact_pair(result.D_random_walk)
    record = ScanRecord(
        ScanKind.DIFFUSION,
        {
            "map": config.map_kind.value,
            "placement": config.placement.value,
            **_config_cols(config),
            "D": d,
            "D_float": d_f,
            "D_rw": rw,
            "D_rw_float": rw_f,
        },
    )
    emit([record], args.format, args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="holediff",
        description="Diffusion coefficients and escape rates of maps with holes",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("scan-positions", help="exact D for every Markov hole position")
    p.add_argument("--map", choices=[k.value for k in MapKind], default="doubling")
    p.add_argument(
        "--placement", choices=("symmetric", "nonsymmetric"), default="symmetric"
    )
    p.add_argument("--s", type=int, required=True, help="resolution: hole size 2^-s")
    _add_output_args(p)
    p.set_defaults(func=cmd_scan_positions)

    p = sub.add_parser("scan-size", help="D versus hole size around a point")
    p.add_argument("--point", required=True, help="limit point as 'p/q'")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--center", action="store_true", help="hole centered on the point")
    group.add_argument("--fix-left", dest="fix_left", action="store_true")
    group.add_argument("--fix-right", dest="fix_right", action="store_true")
    p.add_argument("--h", help="comma-separated hole sizes, e.g. '1/10,1/11'")
    p.add_argument("--dyadic", help="dyadic range 'lo:hi' adding h = 2^-lo .. 2^-hi")
    _add_output_args(p)
    p.set_defaults(func=cmd_scan_size)

    p = sub.add_parser("phi", help="cumulative deviation integral Phi_s")
    p.add_argument("--s", type=int, required=True)
    p.add_argument(
        "--variant", choices=[f.value for f in ScanFamily], default="symmetric-doubling"
    )
    _add_output_args(p)
    p.set_defaults(func=cmd_phi)

    p = sub.add_parser("escape", help="escape-rate position scan paired with D")
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--map", choices=[k.value for k in MapKind], default="doubling")
    p.add_argument("--tol", type=float, default=1e-13)
    _add_output_args(p)
    p.set_defaults(func=cmd_escape)

    p = sub.add_parser("simulate", help="Monte Carlo MSD and survival")
    _add_config_args(p)
    p.add_argument("--particles", type=int, default=10**5)
    p.add_argument("--steps", type=int, default=10**4)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--transient", type=int, default=10)
    p.add_argument("--observable", choices=("msd", "escape", "both"), default="both")
    _add_output_args(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("po-expansion", help="periodic-orbit expansion of D")
    _add_config_args(p)
    p.add_argument("--pmax", type=int, default=12)
    p.add_argument("--ordering", choices=("weight", "period"), default="weight")
    _add_output_args(p)
    p.set_defaults(func=cmd_po_expansion)

    p = sub.add_parser("diffusion", help="exact D for a single configuration")
    _add_config_args(p)
    _add_output_args(p)
    p.set_defaults(func=cmd_diffusion)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, ValueError) as exc:
        print(f"error: invalid configuration: {exc}", file=sys.stderr)
        return 2
    except ConvergenceError as exc:
        print(f"error: numerical non-convergence: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
