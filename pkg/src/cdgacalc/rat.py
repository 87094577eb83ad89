"""Exact rational scalars.

Everything in this package is computed over Q, with no rounding anywhere.
The scalar type is ``gmpy2.mpq`` when gmpy2 is importable (much faster on
the larger eliminations) and ``fractions.Fraction`` otherwise.  Both keep
numerator/denominator coprime with a positive denominator after every
operation, and they hash identically, so the rest of the code treats the
two interchangeably.
"""

from __future__ import annotations

from fractions import Fraction

try:
    from gmpy2 import mpq as _mpq

    Rational = _mpq
except ImportError:  # pragma: no cover - exercised only without gmpy2
    Rational = Fraction

ZERO = Rational(0)
ONE = Rational(1)


def rat(numerator, denominator=1):
    """Build an exact rational from integers (or another rational)."""
    return Rational(numerator, denominator)


def rat_from_str(text: str):
    """Parse ``"p"`` or ``"p/q"`` into an exact rational.

    Raises ``ValueError`` on malformed input or zero denominator.
    """
    s = text.strip()
    if "/" in s:
        num, _, den = s.partition("/")
        d = int(den)
        if d == 0:
            raise ValueError(f"zero denominator in rational {text!r}")
        return Rational(int(num), d)
    return Rational(int(s))


def rat_to_str(value) -> str:
    """Canonical ``p/q`` (or ``p``) rendering, shared by both backends."""
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"
