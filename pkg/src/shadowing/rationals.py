"""Exact rational helpers.

All distances and thresholds in the finite engine are ``fractions.Fraction``
values; the serialized form is ``"p/q"`` (or a bare integer ``"p"``).
Negative denominators are rejected at the parsing boundary so that every
serialized value has a single canonical spelling.
"""

import re
from fractions import Fraction

_RATIONAL_RE = re.compile(r"^(-?\d+)(?:/(\d+))?$")


class RationalFormatError(ValueError):
    """Raised for malformed ``p/q`` strings (including negative denominators)."""


def parse_rational(text):
    """Parse ``"p/q"`` or ``"n"`` into a Fraction.

    >>> parse_rational("3/4")
    Fraction(3, 4)
    """
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int):
        return Fraction(text)
    m = _RATIONAL_RE.match(text.strip()) if isinstance(text, str) else None
    if not m:
        raise RationalFormatError("not a rational 'p/q' string: %r" % (text,))
    num = int(m.group(1))
    den = m.group(2)
    if den is None:
        return Fraction(num)
    den = int(den)
    if den == 0:
        raise RationalFormatError("zero denominator in %r" % (text,))
    return Fraction(num, den)


def format_rational(q):
    """Serialize a Fraction canonically as ``"p/q"`` or ``"p"``."""
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return "%d/%d" % (q.numerator, q.denominator)
