"""Exact rational plumbing shared by every module.

All analytic quantities (hole endpoints, cumulative-function values,
diffusion coefficients) are carried as ``fractions.Fraction``, which already
guarantees lowest terms, positive denominators and exact closed arithmetic.
This module adds the serialization conventions ("num/den" strings, 17
significant-digit float renderings) and dyadic helpers used throughout.
"""

from __future__ import annotations

import sys
from fractions import Fraction

# Exact values can carry numerators with tens of thousands of digits (cycle
# sums over long orbits divide by 2^L - 1); lift CPython's int-to-string
# conversion cap so they serialize.
if hasattr(sys, "set_int_max_str_digits"):
    sys.set_int_max_str_digits(max(sys.get_int_max_str_digits(), 2_000_000))

# Canonical exact-number type for the whole package.
ExactRational = Fraction

ZERO = Fraction(0)
ONE = Fraction(1)
HALF = Fraction(1, 2)


def parse_rational(text: str) -> Fraction:
    """Parse "p/q", integer, or decimal strings into an exact Fraction."""
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a rational: {text!r}") from exc


def format_rational(x: Fraction) -> str:
    """Serialize as "num/den", always with an explicit denominator."""
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def float17(x) -> str:
    """Float rendering with 17 significant digits (round-trip safe)."""
    return f"{float(x):.17g}"


def is_dyadic(x: Fraction, s: int | None = None) -> bool:
    """True if x = r/2^k for some k (k <= s when s is given)."""
    den = Fraction(x).denominator
    if den & (den - 1):
        return False
    return s is None or den <= (1 << s)


def dyadic_level(x: Fraction) -> int:
    """Exponent n for x = i/2^n in lowest terms.  Raises if x is not dyadic."""
    x = Fraction(x)
    if not is_dyadic(x):
        raise ValueError(f"{x} is not a dyadic rational")
    return x.denominator.bit_length() - 1
