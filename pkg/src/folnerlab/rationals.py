"""Exact rational parameters, including the shared irrational surrogate."""

from __future__ import annotations

from fractions import Fraction

from .errors import ConfigError

__all__ = ["GOLDEN_ALPHA", "SURROGATE_DENOMINATOR", "parse_rational"]

# Fibonacci 1134903170 / 1836311903; approximates the golden mean conjugate
# to ~1e-19 and has denominator large enough to count as a surrogate.
SURROGATE_DENOMINATOR = 10**9
GOLDEN_ALPHA = Fraction(1134903170, 1836311903)


def parse_rational(value: object) -> Fraction:
    """Exact rational from "golden", "p/q", decimal strings, or numbers."""
    if isinstance(value, str):
        if value.strip().lower() == "golden":
            return GOLDEN_ALPHA
        return Fraction(value.strip())
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(value)
    raise ConfigError(f"cannot interpret {value!r} as a rational number")
