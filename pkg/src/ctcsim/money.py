"""Exact money and rate arithmetic.

All money paths use rational numbers (`fractions.Fraction`), never binary
floats, so threshold computations are exact and golden-value tests are
bit-stable. Amounts are denominated in dollars; input files carry integer
dollars, rates are parsed from their decimal literals (``0.15`` becomes
``3/20``, not the nearest float).
"""

from __future__ import annotations

from fractions import Fraction
from typing import Union

MoneyLike = Union[int, Fraction]

CENT = Fraction(1, 100)


def as_money(value: MoneyLike) -> Fraction:
    """Coerce an integer or Fraction dollar amount to Fraction."""
    if isinstance(value, bool):
        raise TypeError("bool is not a money amount")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    raise TypeError(f"money must be int or Fraction, got {type(value).__name__}")


def as_rate(value) -> Fraction:
    """Parse a rate into an exact Fraction.

    Accepts Fraction, int, or a decimal string such as ``"0.15"``. Floats are
    rejected: they do not represent decimal rates exactly.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("bool is not a rate")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"rate must be Fraction, int, or decimal string, got {type(value).__name__}")


def ceil_to_cent(amount: Fraction) -> Fraction:
    """Smallest cent-granular amount >= `amount`."""
    cents = -((-amount.numerator * 100) // amount.denominator)
    return Fraction(cents, 100)


def dollars_str(amount: MoneyLike) -> str:
    """Render an amount as a decimal dollar string, cent precision.

    Non-cent-exact amounts are rounded half-up to the cent for display only.
    """
    amount = as_money(amount)
    neg = amount < 0
    cents = (abs(amount.numerator) * 200 + amount.denominator) // (2 * amount.denominator)
    sign = "-" if neg else ""
    return f"{sign}{cents // 100}.{cents % 100:02d}"
