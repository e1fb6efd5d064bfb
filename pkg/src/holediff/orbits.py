"""Periodic-orbit machinery: enumeration, running/standing classification,
small-hole asymptotic factors, and the finite-hole periodic-orbit expansion.

As a hole shrinks onto a point x, the diffusion coefficient behaves as
D ~ J * h where the factor J depends only on the orbit of x.  In the
symmetric two-hole model a periodic orbit is *standing* when it enters the
mirrored hole (some iterate equals 1 - x, necessarily at half the period)
and *running* otherwise; standing orbits backscatter and suppress D while
running orbits enhance it.  For the non-symmetric families all
backscattering comes from dyadic rationals, whose orbits fall onto the
pinned hole at 0.

For finite dyadic holes D is recovered from the mean plus one correction
J - <J> per periodic point inside the scanned hole, truncated by orbit
weight.  Points at hole endpoints count as running.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

import numpy as np

from .diffusion import diffusion_coefficient
from .maps import ConfigError, MapKind, ModelConfig, Placement, decompose_orbit, step_reduced
from .rational import HALF, ONE, ZERO, dyadic_level, is_dyadic


class OrbitClass(str, Enum):
    RUNNING = "running"
    STANDING = "standing"
    DYADIC_PREIMAGE = "dyadic"
    NON_PERIODIC = "nonperiodic"


class LimitMode(str, Enum):
    INTERIOR = "interior"
    FIXED_LEFT = "fixed-left"
    FIXED_RIGHT = "fixed-right"


@dataclass(frozen=True)
class PeriodicPoint:
    point: Fraction
    period: int


@dataclass(frozen=True)
class OrbitClassification:
    orbit_class: OrbitClass
    period: int  # minimal period; 0 for non-periodic and dyadic classes
    limit_mode: LimitMode
    dyadic_level: int | None = None  # n for points i/2^n in lowest terms


def minimal_period(kind: MapKind, x: Fraction):
    """Minimal period of x under the reduced map, or None if not periodic."""
    orbit = decompose_orbit(kind, x)
    if orbit.preperiodic:
        return None
    return len(orbit.cycle)


def standing_entry_time(x: Fraction, period: int):
    """Smallest q with doubling^q(x) = 1 - x, or None (q = period/2 if any)."""
    y = x
    for q in range(1, period):
        y = step_reduced(MapKind.DOUBLING, y)
        if y == ONE - x:
            return q
    return None


def classify(
    map_kind: MapKind,
    placement: Placement,
    x: Fraction,
    limit_mode: LimitMode = LimitMode.INTERIOR,
) -> OrbitClassification:
    """Classify the limit point of a shrinking hole.

    Symmetric doubling model: Standing(p) when some iterate of a periodic x
    hits the mirror point 1 - x, Running(p) otherwise; a periodic point kept
    at a hole *boundary* is always running, because interior points near it
    then miss the mirrored hole.  Non-symmetric families: dyadic rationals
    i/2^n form the backscattering class, periodic points are running, and
    everything else is non-periodic.
    """
    x = Fraction(x)
    if not ZERO <= x < ONE:
        raise ValueError(f"point {x} outside [0, 1)")
    if placement == Placement.SYMMETRIC:
        if map_kind != MapKind.DOUBLING:
            raise ValueError("the symmetric tent model has D = h with no orbit dependence")
        period = minimal_period(MapKind.DOUBLING, x)
        if period is None:
            return OrbitClassification(OrbitClass.NON_PERIODIC, 0, limit_mode)
        if limit_mode != LimitMode.INTERIOR:
            return OrbitClassification(OrbitClass.RUNNING, period, limit_mode)
        if standing_entry_time(x, period) is not None:
            return OrbitClassification(OrbitClass.STANDING, period, limit_mode)
        return OrbitClassification(OrbitClass.RUNNING, period, limit_mode)

    if placement == Placement.NONSYM_LEFT_AT_ZERO:
        if x == ZERO:
            raise ValueError("x = 0 is the pinned hole itself, not a scannable limit point")
        if is_dyadic(x):
            return OrbitClassification(
                OrbitClass.DYADIC_PREIMAGE, 0, limit_mode, dyadic_level(x)
            )
        period = minimal_period(map_kind, x)
        if period is None:
            return OrbitClassification(OrbitClass.NON_PERIODIC, 0, limit_mode)
        return OrbitClassification(OrbitClass.RUNNING, period, limit_mode)

    raise ValueError(f"no small-hole theory for placement {placement}")


def small_hole_factor(
    map_kind: MapKind, placement: Placement, classification: OrbitClassification
) -> Fraction:
    """Exact asymptotic factor J with D ~ J*h as the hole shrinks.

    For the dyadic class the factor depends on which side of the point the
    hole sits.  Orbits reach the pinned hole at 0 from above only; under the
    doubling map that entering neighborhood lies entirely on the right of
    the dyadic point (left-sided holes see no backscatter, J = 2), while the
    tent map folds both sides onto it, so each one-sided hole carries half
    of the interior correction: J = 2 - 2^(-n) instead of 2 - 2^(1-n).
    """
    cls, p = classification.orbit_class, classification.period
    if placement == Placement.SYMMETRIC:
        if map_kind != MapKind.DOUBLING:
            raise ValueError("symmetric tent has no J factors (D = h exactly)")
        if cls == OrbitClass.RUNNING:
            return Fraction((1 << p) + 1, (1 << p) - 1)
        if cls == OrbitClass.STANDING:
            if p % 2:
                raise ValueError("standing orbits have even period")
            q = p // 2
            return Fraction((1 << q) - 1, (1 << q) + 1)
        if cls == OrbitClass.NON_PERIODIC:
            return ONE
        raise ValueError("dyadic class does not arise in the symmetric model")
    if placement == Placement.NONSYM_LEFT_AT_ZERO:
        if cls == OrbitClass.RUNNING:
            return 1 + Fraction(1 << p, (1 << p) - 1)
        if cls == OrbitClass.DYADIC_PREIMAGE:
            n = classification.dyadic_level
            mode = classification.limit_mode
            if map_kind == MapKind.DOUBLING:
                if mode == LimitMode.FIXED_RIGHT:
                    return Fraction(2)
                return 2 - Fraction(2, 1 << n)
            if mode == LimitMode.INTERIOR:
                return 2 - Fraction(2, 1 << n)
            return 2 - Fraction(1, 1 << n)
        if cls == OrbitClass.NON_PERIODIC:
            return Fraction(2)
    raise ValueError(f"unsupported class/placement pair {cls}/{placement}")


# ---------------------------------------------------------------------------
# Enumeration
# ---------------------------------------------------------------------------


def _proper_divisors(p: int) -> list[int]:
    return [q for q in range(1, p) if p % q == 0]


def enumerate_periodic_points(p_max: int) -> list[PeriodicPoint]:
    """All doubling-map periodic points r/(2^p - 1) with minimal period <= p_max."""
    if not 1 <= p_max <= 30:
        raise ValueError("p_max out of supported range 1..30")
    out: list[PeriodicPoint] = []
    for p in range(1, p_max + 1):
        den = (1 << p) - 1
        r = np.arange(den, dtype=np.int64)
        minimal = np.ones(den, dtype=bool)
        for q in _proper_divisors(p):
            minimal &= (r << q) % den != r
        for ri in r[minimal]:
            out.append(PeriodicPoint(Fraction(int(ri), den), p))
    return out


def _grid_range(lo: Fraction, hi: Fraction, den: int) -> np.ndarray:
    """Integers r with lo <= r/den <= hi."""
    first = -((-lo.numerator * den) // lo.denominator)  # ceil(lo * den)
    last = (hi.numerator * den) // hi.denominator  # floor(hi * den)
    return np.arange(first, last + 1, dtype=np.int64)


def periodic_points_in_interval(lo: Fraction, hi: Fraction, p_max: int):
    """Doubling periodic points in the closed interval, with standing flags.

    Yields (point, minimal period, standing) triples; standing means some
    iterate hits the mirror point 1 - x (possible only for even periods).
    """
    out = []
    for p in range(1, p_max + 1):
        den = (1 << p) - 1
        r = _grid_range(lo, hi, den)
        r = r[(r >= 0) & (r < den)]
        if len(r) == 0:
            continue
        minimal = np.ones(len(r), dtype=bool)
        for q in _proper_divisors(p):
            minimal &= (r << q) % den != r
        r = r[minimal]
        if p % 2 == 0:
            standing = (r * ((1 << (p // 2)) + 1)) % den == 0
        else:
            standing = np.zeros(len(r), dtype=bool)
        for ri, st in zip(r, standing):
            out.append((Fraction(int(ri), den), p, bool(st)))
    return out


def standing_points_in_interval(lo: Fraction, hi: Fraction, q_max: int):
    """Standing points with minimal mirror-entry time q <= q_max (period 2q).

    These are solutions of doubling^q(x) = 1 - x, i.e. x = r/(2^q + 1); a
    point is reported at its smallest such q only.
    """
    out = []
    for q in range(1, q_max + 1):
        den = (1 << q) + 1
        r = _grid_range(lo, hi, den)
        r = r[(r >= 1) & (r < den)]
        if len(r) == 0:
            continue
        minimal = np.ones(len(r), dtype=bool)
        for qq in range(1, q):
            minimal &= (r * ((1 << qq) + 1)) % den != 0
        for ri in r[minimal]:
            out.append((Fraction(int(ri), den), 2 * q))
    return out


def dyadic_points_in_interval(lo: Fraction, hi: Fraction, n_max: int):
    """Dyadic rationals i/2^n (odd i, 1 <= n <= n_max) in the closed interval."""
    out = []
    for n in range(1, n_max + 1):
        den = 1 << n
        r = _grid_range(lo, hi, den)
        r = r[r % 2 == 1]
        for ri in r:
            out.append((Fraction(int(ri), den), n))
    return out


def tent_periodic_points_in_interval(lo: Fraction, hi: Fraction, p_max: int):
    """Tent-map periodic points with minimal period <= p_max in [lo, hi].

    Period-p points lie on denominators 2^p -+ 1 (one per monotone branch of
    the p-fold graph); candidates are verified by exact iteration.
    """
    out = []
    seen: set[Fraction] = set()
    for p in range(1, p_max + 1):
        for den in ((1 << p) - 1, (1 << p) + 1):
            for ri in _grid_range(lo, hi, den):
                if not 0 <= ri < den:
                    continue
                x = Fraction(int(ri), den)
                if x in seen:
                    continue
                period = minimal_period(MapKind.TENT, x)
                if period == p:
                    seen.add(x)
                    out.append((x, p))
    return out


# ---------------------------------------------------------------------------
# Periodic-orbit expansion for finite dyadic holes
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PoTerm:
    point: Fraction
    orbit_class: OrbitClass
    period: int  # period, or dyadic level for the dyadic class
    J: Fraction


@dataclass(frozen=True)
class PoExpansion:
    approx: Fraction
    exact: Fraction
    residual: Fraction
    p_max: int
    terms: tuple


def po_expansion(config: ModelConfig, p_max: int, ordering: str = "weight") -> PoExpansion:
    """Truncated periodic-orbit expansion of D for a dyadic Markov hole.

    Symmetric model: D ~ 2^(-s) * (1 + sum (J - 1)) over periodic points in
    the closed hole I_L, each intersection counted separately and endpoint
    points counted as running.  Non-symmetric variants carry the factor-two
    modification D ~ 2^(-s) * (2 + sum (J - 2)), with dyadic rationals in
    the scanned hole I_R supplying the backscattering terms.

    ordering="weight" truncates by modified orbit length: a standing orbit
    of period 2q corrects D as strongly as a running orbit of period q, so
    running orbits are kept to period p_max and standing orbits to
    mirror-entry time q <= p_max (period 2 p_max).  Cutting both classes at
    the same raw period (ordering="period", kept for diagnostics) leaves the
    enhancements of running orbits of period p_max/2 .. p_max uncancelled
    and the truncation does not converge to D.
    """
    if not 1 <= p_max <= 30:
        raise ValueError("p_max out of supported range 1..30")
    if ordering not in ("weight", "period"):
        raise ValueError(f"unknown ordering {ordering!r}")
    h = config.h
    if h.numerator != 1 or (h.denominator & (h.denominator - 1)):
        raise ConfigError(f"hole size {h} is not of the form 2^-s")
    config.markov_level()
    s = h.denominator.bit_length() - 1
    terms: list[PoTerm] = []

    if config.placement == Placement.SYMMETRIC:
        if config.map_kind != MapKind.DOUBLING:
            raise ConfigError("the expansion applies to the symmetric doubling model")
        lo, hi = config.a1, config.a2
        for x, p, standing in periodic_points_in_interval(lo, hi, p_max):
            if standing and x != lo and x != hi:
                continue  # interior standing points enter via their own cutoff
            j = small_hole_factor(
                config.map_kind,
                config.placement,
                OrbitClassification(OrbitClass.RUNNING, p, LimitMode.INTERIOR),
            )
            terms.append(PoTerm(x, OrbitClass.RUNNING, p, j))
        q_cut = p_max if ordering == "weight" else p_max // 2
        for x, p in standing_points_in_interval(lo, hi, q_cut):
            if x == lo or x == hi:
                continue  # endpoint points already counted as running
            j = small_hole_factor(
                config.map_kind,
                config.placement,
                OrbitClassification(OrbitClass.STANDING, p, LimitMode.INTERIOR),
            )
            terms.append(PoTerm(x, OrbitClass.STANDING, p, j))
        base = ONE
    elif config.placement == Placement.NONSYM_LEFT_AT_ZERO:
        lo, hi = config.a3, config.a4
        if config.map_kind == MapKind.DOUBLING:
            periodic = [
                (x, p) for x, p, _ in periodic_points_in_interval(lo, hi, p_max)
            ]
        else:
            periodic = tent_periodic_points_in_interval(lo, hi, p_max)
        for x, p in periodic:
            j = small_hole_factor(
                config.map_kind,
                config.placement,
                OrbitClassification(OrbitClass.RUNNING, p, LimitMode.INTERIOR),
            )
            terms.append(PoTerm(x, OrbitClass.RUNNING, p, j))
        for x, n in dyadic_points_in_interval(lo, hi, p_max):
            if x == lo:
                mode = LimitMode.FIXED_LEFT
            elif x == hi:
                mode = LimitMode.FIXED_RIGHT
            else:
                mode = LimitMode.INTERIOR
            j = small_hole_factor(
                config.map_kind,
                config.placement,
                OrbitClassification(OrbitClass.DYADIC_PREIMAGE, 0, mode, n),
            )
            if j != 2:
                terms.append(PoTerm(x, OrbitClass.DYADIC_PREIMAGE, n, j))
        base = Fraction(2)
    else:
        raise ConfigError("expansion needs symmetric or non-symmetric placement")

    total = base + sum((t.J - base for t in terms), ZERO)
    approx = Fraction(1, 1 << s) * total
    exact = diffusion_coefficient(config).D
    return PoExpansion(approx, exact, abs(approx - exact), p_max, tuple(terms))


# ---------------------------------------------------------------------------
# Size scans toward the asymptotic regime
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AsymptoticRow:
    h: Fraction
    D: Fraction
    J_times_h: Fraction


def hole_at(point: Fraction, limit_mode: LimitMode, h: Fraction) -> ModelConfig:
    """Symmetric-doubling hole of size h converging on the point."""
    point, h = Fraction(point), Fraction(h)
    if limit_mode == LimitMode.INTERIOR:
        a1 = point - h / 2
    elif limit_mode == LimitMode.FIXED_LEFT:
        a1 = point
    else:
        a1 = point - h
    a2 = a1 + h
    if not (ZERO <= a1 and a2 <= HALF):
        raise ConfigError(f"hole [{a1}, {a2}] leaves the admissible region [0, 1/2]")
    return ModelConfig.symmetric(MapKind.DOUBLING, a1, a2)


def asymptotic_scan(
    point: Fraction, limit_mode: LimitMode, h_values
) -> list[AsymptoticRow]:
    """Exact D alongside the prediction J*h for a sequence of hole sizes."""
    point = Fraction(point)
    classification = classify(MapKind.DOUBLING, Placement.SYMMETRIC, point, limit_mode)
    j = small_hole_factor(MapKind.DOUBLING, Placement.SYMMETRIC, classification)
    rows = []
    for h in h_values:
        h = Fraction(h)
        if h <= 0:
            raise ValueError("hole sizes must be positive")
        cfg = hole_at(point, limit_mode, h)
        rows.append(AsymptoticRow(h, diffusion_coefficient(cfg).D, j * h))
    return rows
