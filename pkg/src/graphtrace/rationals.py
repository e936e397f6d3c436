"""Exact rational parsing and formatting.

Every numeric value crossing a file or CLI boundary is a rational encoded
as a string, never a float: "p/q" in lowest terms with q > 0, or a bare
integer "p".
"""

from __future__ import annotations

import re
from fractions import Fraction

_RATIONAL_RE = re.compile(r"^-?\d+(/\d+)?$")


def parse_rational(text: str | int) -> Fraction:
    """Parse "p/q" or "p" (also accepts a plain int). Rejects floats."""
    if isinstance(text, int) and not isinstance(text, bool):
        return Fraction(text)
    if not isinstance(text, str) or not _RATIONAL_RE.match(text):
        raise ValueError(f"not a rational string: {text!r}")
    if "/" in text and int(text.split("/")[1]) == 0:
        raise ValueError(f"zero denominator: {text!r}")
    return Fraction(text)


def format_rational(value: Fraction) -> str:
    """Format in lowest terms: "p" when integral, else "p/q" with q > 0."""
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"
