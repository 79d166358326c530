"""Parsing and formatting of exact rationals in the "p/q" wire format.

Decimal strings are converted exactly ("0.25" -> 1/4); binary floats are
converted through their shortest repr so that a JSON literal like 0.1 means
the decimal 1/10 the author typed, not the nearest double.
"""
from __future__ import annotations

from fractions import Fraction

from .errors import ParseError


def parse_rational(value) -> Fraction:
    """Convert an int, Fraction, "p/q" string, decimal string or float."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise ParseError(f"not a rational: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        value = repr(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"not a rational: {value!r}") from exc
    raise ParseError(f"not a rational: {value!r}")


def format_rational(value: Fraction) -> str:
    """Render as "p" for integers, "p/q" otherwise."""
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"
