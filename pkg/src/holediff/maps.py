"""Piecewise-linear maps with holes: exact reduced and lifted dynamics.

The reduced map is either the doubling map 2x mod 1 or the tent map on the
unit interval.  Two "holes" I_L = [a1, a2) and I_R = [a3, a4) lift the
dynamics by +1 / -1, turning the unit-cell map into a degree-one lift on the
real line along which points diffuse.  Everything here is exact: points are
rationals and the orbit of any rational is eventually periodic, which the
rest of the package exploits to evaluate infinite sums in closed form.

Interval conventions: all branch and hole intervals are half-open
[left, right); x = 1 is a fixed point of the reduced doubling map while the
tent map sends 1 to 0.  These choices affect only measure-zero sets.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from .rational import HALF, ONE, ZERO, format_rational, is_dyadic, parse_rational


class ConfigError(ValueError):
    """Raised for model configurations violating the admissibility rules."""


class MapKind(str, Enum):
    DOUBLING = "doubling"
    TENT = "tent"


class Placement(str, Enum):
    SYMMETRIC = "symmetric"
    NONSYM_LEFT_AT_ZERO = "nonsymmetric"
    GENERAL = "general"


@dataclass(frozen=True)
class ModelConfig:
    """A reduced map plus two equal-size holes.

    Admissibility: 0 <= a1 <= a2 <= 1/2 <= a3 <= a4 <= 1 with equal hole
    sizes a2 - a1 = a4 - a3 (no drift, so the diffusion coefficient exists).
    Symmetric placement ties a4 = 1 - a1 and a3 = 1 - a2; the non-symmetric
    family pins a1 = 0.  The degenerate h = 0 config means "no holes".
    """

    map_kind: MapKind
    placement: Placement
    a1: Fraction
    a2: Fraction
    a3: Fraction
    a4: Fraction

    def __post_init__(self):
        for name in ("a1", "a2", "a3", "a4"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))
        a1, a2, a3, a4 = self.a1, self.a2, self.a3, self.a4
        if not (ZERO <= a1 <= a2 <= HALF <= a3 <= a4 <= ONE):
            raise ConfigError(
                f"endpoints must satisfy 0 <= a1 <= a2 <= 1/2 <= a3 <= a4 <= 1, "
                f"got {a1}, {a2}, {a3}, {a4}"
            )
        if a2 - a1 != a4 - a3:
            raise ConfigError("holes must have equal size (a2-a1 == a4-a3)")
        if self.placement == Placement.SYMMETRIC:
            if a4 != ONE - a1 or a3 != ONE - a2:
                raise ConfigError("symmetric placement requires a4=1-a1, a3=1-a2")
        elif self.placement == Placement.NONSYM_LEFT_AT_ZERO:
            if a1 != ZERO:
                raise ConfigError("non-symmetric placement pins a1 = 0")

    @property
    def h(self) -> Fraction:
        """Hole size a2 - a1."""
        return self.a2 - self.a1

    @classmethod
    def symmetric(cls, map_kind: MapKind, a1, a2) -> "ModelConfig":
        a1, a2 = Fraction(a1), Fraction(a2)
        return cls(map_kind, Placement.SYMMETRIC, a1, a2, ONE - a2, ONE - a1)

    @classmethod
    def nonsymmetric(cls, map_kind: MapKind, a3, h) -> "ModelConfig":
        """Left hole [0, h) with the right hole [a3, a3+h) scanned freely."""
        a3, h = Fraction(a3), Fraction(h)
        return cls(map_kind, Placement.NONSYM_LEFT_AT_ZERO, ZERO, h, a3, a3 + h)

    @classmethod
    def symmetric_markov(cls, map_kind: MapKind, s: int, index: int) -> "ModelConfig":
        """Symmetric dyadic hole I_L = [k/2^s, (k+1)/2^s); 0 <= k < 2^(s-1)."""
        if not 0 <= index < (1 << (s - 1)):
            raise ConfigError(f"position index {index} out of range at s={s}")
        unit = Fraction(1, 1 << s)
        return cls.symmetric(map_kind, index * unit, (index + 1) * unit)

    @classmethod
    def nonsymmetric_markov(cls, map_kind: MapKind, s: int, index: int) -> "ModelConfig":
        """Non-symmetric dyadic family: a3 = 1/2 + (i-1)/2^s, i = 1..2^(s-1)."""
        if not 1 <= index <= (1 << (s - 1)):
            raise ConfigError(f"position index {index} out of range at s={s}")
        unit = Fraction(1, 1 << s)
        return cls.nonsymmetric(map_kind, HALF + (index - 1) * unit, unit)

    def markov_level(self) -> int:
        """Smallest s with all endpoints of the form r/2^s; ConfigError if none."""
        if not all(is_dyadic(a) for a in (self.a1, self.a2, self.a3, self.a4)):
            raise ConfigError("endpoints are not dyadic (non-Markov config)")
        return max(a.denominator.bit_length() - 1 for a in (self.a1, self.a2, self.a3, self.a4))

    def to_record(self) -> dict:
        """Flat string record used by the CSV/JSON interfaces."""
        return {
            "map": self.map_kind.value,
            "placement": self.placement.value,
            "a1": format_rational(self.a1),
            "a2": format_rational(self.a2),
            "a3": format_rational(self.a3),
            "a4": format_rational(self.a4),
        }

    @classmethod
    def from_record(cls, record: dict) -> "ModelConfig":
        return cls(
            MapKind(record["map"]),
            Placement(record["placement"]),
            *(parse_rational(record[k]) for k in ("a1", "a2", "a3", "a4")),
        )


def _check_unit_interval(x: Fraction) -> Fraction:
    x = Fraction(x)
    if not ZERO <= x <= ONE:
        raise ValueError(f"point {x} outside [0, 1]")
    return x


def step_reduced(kind: MapKind, x: Fraction) -> Fraction:
    """One step of the reduced self-map on [0, 1].

    Doubling: 2x for x < 1/2, 2x - 1 for 1/2 <= x < 1, fixed point at 1.
    Tent: 2x for x < 1/2, 2 - 2x for x >= 1/2.
    """
    x = _check_unit_interval(x)
    if kind == MapKind.DOUBLING:
        if x < HALF:
            return 2 * x
        if x < ONE:
            return 2 * x - 1
        return ONE
    if x < HALF:
        return 2 * x
    return 2 - 2 * x


def jump(config: ModelConfig, x: Fraction) -> int:
    """Integer displacement at x: +1 inside I_L, -1 inside I_R, else 0."""
    x = _check_unit_interval(x)
    if config.a1 <= x < config.a2:
        return 1
    if config.a3 <= x < config.a4:
        return -1
    return 0


def step_lifted(config: ModelConfig, X) -> Fraction:
    """One step of the degree-one lift M(X + b) = M(X) + b on the real line."""
    X = Fraction(X)
    b = X.numerator // X.denominator
    x = X - b
    return b + jump(config, x) + step_reduced(config.map_kind, x)


@dataclass(frozen=True)
class OrbitDecomposition:
    """Orbit of a rational split into its transient and its cycle.

    Applying the reduced map to the last preperiodic point yields the first
    cycle point, and the cycle closes on itself.  Doubling orbits live in
    [0, 1); tent orbits may pass through the point 1 (which maps to 0).
    """

    preperiodic: tuple
    cycle: tuple


def decompose_orbit(kind: MapKind, x: Fraction) -> OrbitDecomposition:
    """Iterate until the first repeat and split the trajectory.

    Every rational is eventually periodic under both maps: doubling never
    increases the odd part of the denominator and strips one factor of two
    per step, so the trajectory length is bounded by the multiplicative
    order of 2 modulo the odd part plus the dyadic depth.
    """
    x = Fraction(x)
    if not ZERO <= x < ONE:
        raise ValueError(f"point {x} outside [0, 1)")
    seen: dict[Fraction, int] = {}
    trajectory: list[Fraction] = []
    while x not in seen:
        seen[x] = len(trajectory)
        trajectory.append(x)
        x = step_reduced(kind, x)
    start = seen[x]
    return OrbitDecomposition(tuple(trajectory[:start]), tuple(trajectory[start:]))
