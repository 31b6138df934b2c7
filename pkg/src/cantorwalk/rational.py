"""Helpers for exact rationals and their "p/q" string form."""

from fractions import Fraction


def rat(value) -> Fraction:
    """Coerce ints, "p/q" strings, or Fractions to an exact Fraction.

    Floats are rejected: every quantity entering the exact layer must be
    stated as a rational.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"not an exact rational: {value!r}")


def rat_str(value: Fraction) -> str:
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"
