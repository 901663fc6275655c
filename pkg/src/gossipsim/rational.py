"""Exact rational values for configs, counters, and reports.

Every weight, cap, threshold, counter, and score in this package is a
``fractions.Fraction``.  Serialized form is either a decimal string with an
exact re-parse guarantee (only possible when the denominator is 2^a * 5^b) or
a ``"p/q"`` fraction string; integers stay plain JSON integers.
"""

from __future__ import annotations

from fractions import Fraction

Rational = Fraction

ZERO = Fraction(0)
ONE = Fraction(1)


class RationalFormatError(ValueError):
    """Raised when a value cannot be read as an exact rational."""


def parse_rational(value: object, where: str = "value") -> Fraction:
    """Read an exact rational from an int, Fraction, or string.

    Strings may be decimal (``"0.0324"``, ``"-25"``) or fractions
    (``"3/4"``).  Floats are accepted for convenience and converted via their
    shortest decimal repr, which round-trips the literal the user typed.
    """
    if isinstance(value, bool):
        raise RationalFormatError(f"{where}: expected a rational, got a boolean")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(repr(value))
    if isinstance(value, str):
        text = value.strip()
        try:
            if "/" in text:
                num, _, den = text.partition("/")
                return Fraction(int(num.strip()), int(den.strip()))
            return Fraction(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise RationalFormatError(f"{where}: cannot parse rational {value!r}") from exc
    raise RationalFormatError(f"{where}: cannot parse rational {value!r}")


def _decimal_digits(denominator: int) -> int | None:
    """Number of decimal places needed, or None if no finite expansion."""
    digits = 0
    d = denominator
    while d % 2 == 0:
        d //= 2
        digits += 1
    fives = 0
    while d % 5 == 0:
        d //= 5
        fives += 1
    if d != 1:
        return None
    return max(digits, fives)


def format_rational(value: Fraction) -> int | str:
    """Serialize exactly: int, decimal string, or ``"p/q"`` string."""
    if value.denominator == 1:
        return int(value)
    digits = _decimal_digits(value.denominator)
    if digits is None:
        return f"{value.numerator}/{value.denominator}"
    sign = "-" if value < 0 else ""
    scaled = abs(value.numerator) * 10**digits // value.denominator
    text = str(scaled).rjust(digits + 1, "0")
    whole, frac = text[:-digits], text[-digits:]
    return f"{sign}{whole}.{frac}"


def rational_repr(value: Fraction) -> str:
    """Always-string form, for JSON maps whose values must share a type."""
    out = format_rational(value)
    return str(out)
