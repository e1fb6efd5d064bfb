"""Bit-exact Monte Carlo simulation of the lifted dynamics.

Naive floating-point iteration of slope-2 maps is useless here: the map
shifts the binary expansion left once per step, so any finite-precision
seed collapses onto the fixed point after one mantissa width of steps.
Instead each walker carries the leading 64 bits of its fractional
coordinate as an integer word.  One doubling step shifts out the top bit
and shifts in one fresh random bit; one tent step complements the word
first when the top bit is set (2 - 2x flips every remaining digit of the
expansion).  Fresh uniform bits reproduce the Lebesgue-stationary symbolic
dynamics exactly, so ensemble statistics carry no discretization drift.

Hole membership is tested on the word against the endpoint words
ceil(a * 2^64); for a word value these half-open tests are exact, and the
unrealized tail bits bias them by less than 2^-64 per step.

Randomness comes from one numpy PCG64 generator (period 2^128) per
ensemble, consumed in a fixed vectorized order (one 64-bit word per walker
per 64 steps), so results are bit-reproducible for a given seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .maps import MapKind, ModelConfig

WORD = 64
WORD_MASK = (1 << WORD) - 1
TOP_BIT = np.uint64(1 << (WORD - 1))


def hole_words(config: ModelConfig):
    """Hole endpoints scaled to the 64-bit word grid.

    Returns (L_lo, L_hi, R_lo, R_hi) with membership lo <= word <= hi, or
    None for the degenerate h = 0 config.  Left endpoints round up and
    right endpoints map to ceil - 1: for integer words both half-open tests
    are exact.
    """
    if config.h == 0:
        return None

    def ceil_scaled(a: Fraction) -> int:
        return -((-a.numerator << WORD) // a.denominator)

    return (
        ceil_scaled(config.a1),
        ceil_scaled(config.a2) - 1,
        ceil_scaled(config.a3),
        ceil_scaled(config.a4) - 1,
    )


class BitstreamWalker:
    """A single walker: lattice cell plus the 64-bit fractional word.

    The scalar reference implementation of the step rule; the ensemble
    functions below vectorize exactly the same arithmetic.  Bits are
    injected by the caller (tests) or drawn from the generator state.
    """

    def __init__(self, mantissa: int, cell: int = 0, seed: int | None = None):
        self.mantissa = mantissa & WORD_MASK
        self.cell = cell
        self.rng_state = np.random.default_rng(seed)

    @property
    def fraction(self) -> Fraction:
        return Fraction(self.mantissa, 1 << WORD)

    def step(self, config: ModelConfig, bit: int | None = None) -> None:
        """One lifted-map step: jump from hole membership, then bit shift."""
        if bit is None:
            bit = int(self.rng_state.integers(0, 2))
        words = hole_words(config)
        if words is not None:
            l_lo, l_hi, r_lo, r_hi = words
            if l_lo <= self.mantissa <= l_hi:
                self.cell += 1
            elif r_lo <= self.mantissa <= r_hi:
                self.cell -= 1
        m = self.mantissa
        if config.map_kind == MapKind.TENT and m >> (WORD - 1):
            m = ~m & WORD_MASK
        self.mantissa = ((m << 1) | (bit & 1)) & WORD_MASK


@dataclass(frozen=True)
class MsdSeries:
    """Mean square displacement at recorded times, with batch-mean errors."""

    times: np.ndarray
    msd: np.ndarray
    stderr: np.ndarray
    n_particles: int
    batch_msd: np.ndarray | None = None  # (batches, len(times))


@dataclass(frozen=True)
class SurvivalSeries:
    times: np.ndarray
    survivors: np.ndarray
    n_particles: int
    batch_survivors: np.ndarray | None = None


def _default_record_times(n_steps: int, points: int = 48) -> np.ndarray:
    return np.unique(np.geomspace(1, n_steps, points).round().astype(np.int64))


def _membership(m: np.ndarray, words) -> tuple[np.ndarray, np.ndarray]:
    l_lo, l_hi, r_lo, r_hi = (np.uint64(w) for w in words)
    return (m >= l_lo) & (m <= l_hi), (m >= r_lo) & (m <= r_hi)


def simulate_ensemble(
    config: ModelConfig,
    n_particles: int,
    n_steps: int,
    seed: int,
    record_times=None,
    batches: int = 16,
) -> MsdSeries:
    """MSD of n_particles walkers over n_steps lifted-map iterations.

    Walkers start uniformly (random mantissa words) in the cell [0, 1).
    Displacement is counted in lattice cells (the summed jumps): the
    intra-cell fractional motion is bounded by 1 and drops out of the MSD
    slope, and the closed system then has MSD identically zero.
    Deterministic for a given seed.
    """
    if n_particles < 10**3 or n_steps < 10**2:
        raise ValueError("need n_particles >= 1e3 and n_steps >= 1e2")
    if n_particles * n_steps > 2 * 10**10:
        raise ValueError("ensemble too large (n_particles * n_steps > 2e10)")
    n = (n_particles // batches) * batches
    rng = np.random.default_rng(seed)
    record = (
        _default_record_times(n_steps)
        if record_times is None
        else np.unique(np.asarray(record_times, dtype=np.int64))
    )

    m = rng.integers(0, 1 << WORD, size=n, dtype=np.uint64)
    cell = np.zeros(n, dtype=np.int64)
    words = hole_words(config)
    tent = config.map_kind == MapKind.TENT

    batch_msd = np.empty((batches, len(record)))
    next_record = 0
    bits = None
    for step in range(1, n_steps + 1):
        if words is not None:
            in_l, in_r = _membership(m, words)
            cell += in_l
            cell -= in_r
        if bits is None or (step - 1) % WORD == 0:
            bits = rng.integers(0, 1 << WORD, size=n, dtype=np.uint64)
        bit = (bits >> np.uint64((step - 1) % WORD)) & np.uint64(1)
        if tent:
            m = np.where(m & TOP_BIT, ~m, m)
        m = (m << np.uint64(1)) | bit
        if next_record < len(record) and step == record[next_record]:
            sq = (cell * cell).astype(np.float64)
            batch_msd[:, next_record] = sq.reshape(batches, -1).mean(axis=1)
            next_record += 1

    msd = batch_msd.mean(axis=0)
    stderr = batch_msd.std(axis=0, ddof=1) / math.sqrt(batches)
    return MsdSeries(record, msd, stderr, n, batch_msd)


def _slope(x: np.ndarray, y: np.ndarray) -> float:
    xc = x - x.mean()
    return float((xc * (y - y.mean())).sum() / (xc * xc).sum())


def estimate_D(series: MsdSeries, fit_window: float = 0.5):
    """Diffusion coefficient as the least-squares slope of MSD against 2n.

    The window is the trailing fraction of recorded times (default: last
    half).  The error comes from the spread of per-batch slopes when batch
    data is present, else from propagating the per-point standard errors
    through the least-squares weights.
    """
    if not 0 < fit_window <= 1:
        raise ValueError("fit_window must be in (0, 1]")
    start = int(math.floor(len(series.times) * (1 - fit_window)))
    idx = slice(start, len(series.times))
    x = 2.0 * series.times[idx]
    y = series.msd[idx]
    if len(y) < 10:
        raise ValueError(f"only {len(y)} points in the fit window; need >= 10")
    d_est = _slope(x, y)
    if series.batch_msd is not None:
        slopes = [_slope(x, bm[idx]) for bm in series.batch_msd]
        stderr = float(np.std(slopes, ddof=1) / math.sqrt(len(slopes)))
    else:
        xc = x - x.mean()
        weights = xc / (xc * xc).sum()
        stderr = float(np.sqrt(((weights * series.stderr[idx]) ** 2).sum()))
    return d_est, stderr


def simulate_survival(
    config: ModelConfig,
    n_particles: int,
    n_steps: int,
    seed: int,
    batches: int = 16,
) -> SurvivalSeries:
    """Survivor counts of the open map: walkers die on first hole entry."""
    if n_particles < 10**3 or n_steps < 10**2:
        raise ValueError("need n_particles >= 1e3 and n_steps >= 1e2")
    n = (n_particles // batches) * batches
    rng = np.random.default_rng(seed)
    m = rng.integers(0, 1 << WORD, size=n, dtype=np.uint64)
    alive = np.ones(n, dtype=bool)
    words = hole_words(config)
    tent = config.map_kind == MapKind.TENT

    counts = np.empty((batches, n_steps + 1), dtype=np.int64)
    bits = None
    for step in range(n_steps + 1):
        if words is not None:
            in_l, in_r = _membership(m, words)
            alive &= ~(in_l | in_r)
        counts[:, step] = alive.reshape(batches, -1).sum(axis=1)
        if step == n_steps or not alive.any():
            counts[:, step:] = counts[:, step][:, None]
            break
        if bits is None or step % WORD == 0:
            bits = rng.integers(0, 1 << WORD, size=n, dtype=np.uint64)
        bit = (bits >> np.uint64(step % WORD)) & np.uint64(1)
        if tent:
            m = np.where(m & TOP_BIT, ~m, m)
        m = (m << np.uint64(1)) | bit
    times = np.arange(n_steps + 1, dtype=np.int64)
    return SurvivalSeries(times, counts.sum(axis=0), n, counts)


def estimate_escape(
    config: ModelConfig,
    n_particles: int,
    n_steps: int,
    seed: int,
    transient: int = 10,
    min_survivors: int = 100,
    batches: int = 16,
):
    """Escape rate from the exponential decay of the survival fraction.

    Fits ln S(n) by least squares after discarding the initial transient,
    up to the last step with at least min_survivors pooled walkers.  The
    error is the spread of per-batch fits.  Returns (gamma, stderr, series).
    """
    series = simulate_survival(config, n_particles, n_steps, seed, batches)
    pooled = series.survivors
    if pooled[-1] == series.n_particles:  # closed system, no escape at all
        return 0.0, 0.0, series
    end = int(np.searchsorted(-pooled, -min_survivors))  # first below threshold
    window = np.arange(transient, min(end, len(pooled)))
    if len(window) < 4:
        raise ValueError(
            f"only {len(window)} usable steps between the transient and the "
            f"{min_survivors}-survivor floor; increase n_particles"
        )
    x = window.astype(float)
    gamma = -_slope(x, np.log(pooled[window]))
    slopes = []
    for bc in series.batch_survivors:
        ok = window[bc[window] > 0]
        if len(ok) >= 4:
            slopes.append(-_slope(ok.astype(float), np.log(bc[ok])))
    if len(slopes) < 2:
        raise ValueError("too few batches with survivors for an error estimate")
    stderr = float(np.std(slopes, ddof=1) / math.sqrt(len(slopes)))
    return gamma, stderr, series
