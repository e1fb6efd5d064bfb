"""Exact evaluation of the cumulative jump integral T and the diffusion
coefficient D for maps with holes.

The Taylor-Green-Kubo formula reduces D to values of a cumulative function
T(x) that satisfies a self-similar functional recursion.  Unrolling the
recursion gives the weighted orbit sum

    T(x) = sum_k  w_k * t(M^k x),      w_0 = 1,  w_{k+1} = sigma(x_k) * w_k / 2,

where t is a piecewise-linear single-step summand supported on the holes and
sigma is +1 on the left branch and, for the tent map only, -1 on the right
branch (the recursion's -T(2-2x)/2 cases).  For rational x the orbit is
eventually periodic, so the sum splits into a finite transient plus a
geometric cycle sum and evaluates in closed form as an exact rational.

D then follows from four T values:

    D = T(a2) - T(a1) - T(a4) + T(a3) - h,

which for symmetrically placed holes in the doubling map collapses to
2*T(a2) - 2*T(a1) - h (T is symmetric about 1/2 in that case; both routes
are computed and compared).  The random-walk baseline is D_rw = h.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

import numpy as np

from .maps import (
    ConfigError,
    MapKind,
    ModelConfig,
    Placement,
    decompose_orbit,
    step_reduced,
)
from .rational import HALF, ONE, ZERO


def t_single(config: ModelConfig, x: Fraction) -> Fraction:
    """Single-step summand t(x) = |[0,x] ∩ I_L| - |[0,x] ∩ I_R|.

    Equivalent to the five-branch form: 0 below a1; x - a1 on [a1, a2);
    h on [a2, a3); a4 - x on [a3, a4); 0 at and above a4.
    """
    x = Fraction(x)
    if not ZERO <= x <= ONE:
        raise ValueError(f"point {x} outside [0, 1]")
    c = config
    return min(x, c.a2) - min(x, c.a1) - min(x, c.a4) + min(x, c.a3)


def _branch_sign(kind: MapKind, x: Fraction) -> int:
    """Weight sign picked up when the recursion descends through x."""
    if kind == MapKind.TENT and x >= HALF:
        return -1
    return 1


def _weighted_orbit_sum(config: ModelConfig, points) -> tuple[Fraction, int]:
    """sum_k w_k t(x_k) over the points, plus the sign product of the leg.

    Accumulated as one integer Horner pass over a common denominator, so the
    cost stays linear in the orbit length (a cycle can run to tens of
    thousands of points; incremental Fraction sums would go quadratic from
    their ever-growing denominators).
    """
    kind = config.map_kind
    values = []
    sign = 1
    for point in points:
        t = t_single(config, point)
        values.append(-t if sign < 0 else t)
        sign *= _branch_sign(kind, point)
    if not values:
        return ZERO, sign
    common = 1
    for v in values:
        common = common * v.denominator // math.gcd(common, v.denominator)
    acc = 0
    for v in values:  # Horner: acc picks up 2^(L-1-k) for the k-th term
        acc = 2 * acc + v.numerator * (common // v.denominator)
    return Fraction(acc, common << (len(values) - 1)), sign


def T_exact(config: ModelConfig, x: Fraction) -> Fraction:
    """Closed-form T(x) for rational x.

    The transient part of the orbit is summed term by term; the cycle of
    length L contributes a geometric series with ratio (+-1) * 2^(-L),
    summed exactly.  T(0) = T(1) = 0 for every admissible config.
    """
    x = Fraction(x)
    if not ZERO <= x <= ONE:
        raise ValueError(f"point {x} outside [0, 1]")
    if x == ONE:
        # Boundary condition of the recursion; t(1) = 0 and the orbit of 1
        # stays at a t-free fixed point (doubling) or falls to 0 (tent).
        return ZERO
    orbit = decompose_orbit(config.map_kind, x)
    head, head_sign = _weighted_orbit_sum(config, orbit.preperiodic)
    cycle_sum, cycle_sign = _weighted_orbit_sum(config, orbit.cycle)
    m, length = len(orbit.preperiodic), len(orbit.cycle)
    head_weight = Fraction(head_sign, 1 << m)
    cycle_ratio = Fraction(cycle_sign, 1 << length)
    return head + head_weight * cycle_sum / (ONE - cycle_ratio)


def T_approx(config: ModelConfig, x, tol: float) -> float:
    """Truncated orbit sum, within tol of the true T at the given point.

    Since 0 <= t <= h and |weights| halve each step, truncating after the
    2^(-K) term leaves a tail bounded by h * 2^(-K) <= tol for
    K = ceil(log2(h / tol)).  Floats are converted to the exact dyadic
    rational they represent, so the iteration itself is error free.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    h = config.h
    if h == 0:
        return 0.0
    x = Fraction(x)
    if not ZERO <= x <= ONE:
        raise ValueError(f"point {x} outside [0, 1]")
    terms = max(0, math.ceil(math.log2(float(h) / tol))) + 1
    kind = config.map_kind
    total = ZERO
    weight = Fraction(1)
    for _ in range(terms):
        total += weight * t_single(config, x)
        weight *= Fraction(_branch_sign(kind, x), 2)
        x = step_reduced(kind, x)
        if x == ONE:
            x = step_reduced(kind, x)  # tent sends 1 -> 0; doubling fixes 1
            if x == ONE:
                break
    return float(total)


@dataclass(frozen=True)
class DiffusionResult:
    """Exact diffusion coefficient with its random-walk baseline."""

    D: Fraction
    D_random_walk: Fraction
    config: ModelConfig


def diffusion_coefficient(config: ModelConfig) -> DiffusionResult:
    """Exact D for any admissible config via the four-term T formula."""
    c = config
    four_term = (
        T_exact(c, c.a2) - T_exact(c, c.a1) - T_exact(c, c.a4) + T_exact(c, c.a3) - c.h
    )
    if c.placement == Placement.SYMMETRIC and c.map_kind == MapKind.DOUBLING:
        two_term = 2 * T_exact(c, c.a2) - 2 * T_exact(c, c.a1) - c.h
        if two_term != four_term:
            raise AssertionError(
                f"symmetric reduction disagrees: {two_term} != {four_term}"
            )
    d_rw = ((c.a4 - c.a3) + (c.a2 - c.a1)) / 2
    return DiffusionResult(four_term, d_rw, config)


# ---------------------------------------------------------------------------
# Parent-child relation between a dyadic hole and its two half-size children
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ChildDiffusion:
    d_parent: Fraction
    d_left: Fraction
    d_right: Fraction
    identity_holds: bool


def child_configs(config: ModelConfig) -> tuple[ModelConfig, ModelConfig]:
    """Split a dyadic Markov hole into its left and right half-size children.

    Symmetric placement splits I_L (I_R follows by mirror symmetry); the
    non-symmetric family splits the scanned hole I_R while the pinned left
    hole [0, h) shrinks to [0, h/2) with the halved hole size.
    """
    s = _dyadic_scale(config)
    del s  # only validates dyadicity
    if config.placement == Placement.SYMMETRIC:
        mid = (config.a1 + config.a2) / 2
        return (
            ModelConfig.symmetric(config.map_kind, config.a1, mid),
            ModelConfig.symmetric(config.map_kind, mid, config.a2),
        )
    if config.placement == Placement.NONSYM_LEFT_AT_ZERO:
        mid = (config.a3 + config.a4) / 2
        return (
            ModelConfig.nonsymmetric(config.map_kind, config.a3, config.h / 2),
            ModelConfig.nonsymmetric(config.map_kind, mid, config.h / 2),
        )
    raise ConfigError("parent-child relation needs symmetric or non-symmetric placement")


def _dyadic_scale(config: ModelConfig) -> int:
    """Scale s with h = 2^(-s) for a dyadic Markov hole; ConfigError otherwise."""
    config.markov_level()
    h = config.h
    if h.numerator != 1 or (h.denominator & (h.denominator - 1)):
        raise ConfigError(f"hole size {h} is not of the form 2^-s")
    return h.denominator.bit_length() - 1


def child_diffusion(config: ModelConfig) -> ChildDiffusion:
    """Evaluate both children and verify the exact parent-child identity.

    D_s = 2 D^0 + 2 D^1 - 2^(-s) for symmetric placement; the non-symmetric
    variants carry 2^(-s+1) instead (the permanent running orbit at x = 0
    doubles the rescaled fluctuations).
    """
    s = _dyadic_scale(config)
    left, right = child_configs(config)
    d_parent = diffusion_coefficient(config).D
    d_left = diffusion_coefficient(left).D
    d_right = diffusion_coefficient(right).D
    if config.placement == Placement.SYMMETRIC:
        term = Fraction(1, 1 << s)
    else:
        term = Fraction(2, 1 << s)
    holds = d_parent == 2 * d_left + 2 * d_right - term
    return ChildDiffusion(d_parent, d_left, d_right, holds)


# ---------------------------------------------------------------------------
# Exact position scans over all Markov holes at resolution s
# ---------------------------------------------------------------------------


class ScanFamily(str, Enum):
    """The four Markov scan families of the model."""

    SYM_DOUBLING = "symmetric-doubling"
    SYM_TENT = "symmetric-tent"
    NS_DOUBLING = "nonsymmetric-doubling"
    NS_TENT = "nonsymmetric-tent"

    @property
    def map_kind(self) -> MapKind:
        return MapKind.TENT if "tent" in self.value else MapKind.DOUBLING

    @property
    def symmetric(self) -> bool:
        return self.value.startswith("symmetric")


def scan_config(family: ScanFamily, s: int, index: int) -> ModelConfig:
    if family.symmetric:
        return ModelConfig.symmetric_markov(family.map_kind, s, index)
    return ModelConfig.nonsymmetric_markov(family.map_kind, s, index + 1)


def scan_mean(family: ScanFamily, s: int) -> Fraction:
    """Exact family mean of D over all positions: 2^(-s), or 2(h - h^2)."""
    h = Fraction(1, 1 << s)
    if family == ScanFamily.SYM_DOUBLING or family == ScanFamily.SYM_TENT:
        return h
    return 2 * (h - h * h)


def _scan_d_scaled(family: ScanFamily, s: int) -> np.ndarray:
    """D * 4^s for every Markov position, as an int64 vector.

    Works on the integer grid r = x * 2^s, vectorized over all 2^(s-1)
    positions at once.  Grid orbits lose one power of two per step and die
    at 0 within s steps (the tent map may pass through 1 first), so each
    T value is a short exact integer sum; the summand is t_single in grid
    units and the tent branch sign rides along as a +-1 vector.
    """
    if s < 1:
        raise ValueError("s must be >= 1")
    n = 1 << s
    half = 1 << (s - 1)
    tent = family.map_kind == MapKind.TENT
    idx = np.arange(half, dtype=np.int64)
    ones = np.ones(half, dtype=np.int64)

    if family.symmetric:
        a_bounds = (idx, idx + 1, n - idx - 1, n - idx)
    else:
        a_bounds = (0 * ones, ones, half + idx, half + idx + 1)

    def t_grid(r: np.ndarray) -> np.ndarray:
        a1, a2, a3, a4 = a_bounds
        return (
            np.minimum(r, a2)
            - np.minimum(r, a1)
            - np.minimum(r, a4)
            + np.minimum(r, a3)
        )

    def T_scaled(r0: np.ndarray) -> np.ndarray:
        # T(r0 / 2^s) * 4^s; after s steps the orbit sits at 0 or 1 where
        # t vanishes, so the loop below captures the full sum.
        acc = np.zeros(half, dtype=np.int64)
        r = r0.copy()
        sign = ones.copy()
        for j in range(s):
            acc += sign * t_grid(r) * np.int64(1 << (s - j))
            if tent:
                right = r >= half
                sign = np.where(right, -sign, sign)
                r = np.where(right, 2 * n - 2 * r, 2 * r)
            else:
                r = (2 * r) % n
        return acc

    h_scaled = np.int64(1 << s)  # h * 4^s = 2^s
    a1, a2, a3, a4 = a_bounds
    if family == ScanFamily.SYM_DOUBLING:
        return 2 * (T_scaled(a2) - T_scaled(a1)) - h_scaled
    return T_scaled(a2) - T_scaled(a1) - T_scaled(a4) + T_scaled(a3) - h_scaled


@dataclass(frozen=True)
class PositionRow:
    index: int
    config: ModelConfig
    D: Fraction


def position_scan(family: ScanFamily, s: int) -> list[PositionRow]:
    """Exact D at every Markov position of the family at resolution s."""
    scaled = _scan_d_scaled(family, s)
    denom = 1 << (2 * s)
    return [
        PositionRow(i, scan_config(family, s, i), Fraction(int(v), denom))
        for i, v in enumerate(scaled)
    ]


def phi_cumulative(s: int, family: ScanFamily = ScanFamily.SYM_DOUBLING):
    """Breakpoints of the cumulative deviation integral Phi_s.

    Phi_s(x) = 2^(s+1) * integral_0^x (D(y) - <D>) dy over the position
    coordinate y, where D(y) is the coefficient of the Markov hole containing
    y and <D> is the exact family mean.  The integrand is a step function, so
    Phi_s is piecewise linear and is returned as its exact breakpoint values
    (2^(s-1) + 1 of them); both endpoints are 0 by the mean law.
    """
    if not 1 <= s <= 24:
        raise ValueError("s out of supported range 1..24")
    scaled = _scan_d_scaled(family, s)
    mean_scaled = scan_mean(family, s) * (1 << (2 * s))  # integer for all families
    # Phi at breakpoint j reduces to 2 * sum_{k<j} (D_k - mean) * 4^s / 4^s.
    unit = Fraction(1, 1 << s)
    start = ZERO if family.symmetric else HALF
    denom = 1 << (2 * s)
    points = [(start, ZERO)]
    acc = ZERO
    for k, v in enumerate(scaled):
        acc += int(v) - mean_scaled
        points.append((start + (k + 1) * unit, Fraction(2 * acc, denom)))
    return points
