"""Exact scalar arithmetic: arbitrary-precision rationals plus a +infinity sentinel.

All geometry in this package is done over the rationals, never floats.
``Rational`` is gmpy2's ``mpq``: always in canonical form (gcd-reduced,
positive denominator) and exact under +, -, *, /.

Infinite persistence values are represented by the singleton ``INF``.
gmpy2 raises ``TypeError`` when an ``mpq`` is compared against an unknown
type instead of returning ``NotImplemented``, so ``INF`` must never appear
on the right-hand side of a bare comparison with a rational.  Use the
extended-order helpers below (``scalar_lt``, ``scalar_max``, ``abs_diff``,
``half``) whenever a value may be infinite.
"""

from __future__ import annotations

import re
from typing import Iterable, Union

from gmpy2 import mpq

Rational = mpq


class PlusInfinity:
    """Singleton standing for +infinity in diagram coordinates and distances."""

    __slots__ = ()

    def __repr__(self):
        return "inf"

    __str__ = __repr__

    def __eq__(self, other):
        return isinstance(other, PlusInfinity)

    def __ne__(self, other):
        return not isinstance(other, PlusInfinity)

    def __hash__(self):
        return hash(float("inf"))

    # Comparisons are only defined with INF on the left; see module docstring.
    def __lt__(self, other):
        _require_scalar(other)
        return False

    def __le__(self, other):
        _require_scalar(other)
        return isinstance(other, PlusInfinity)

    def __gt__(self, other):
        _require_scalar(other)
        return not isinstance(other, PlusInfinity)

    def __ge__(self, other):
        _require_scalar(other)
        return True

    def __reduce__(self):
        return (_restore_inf, ())


INF = PlusInfinity()


def _restore_inf():
    return INF


ExtendedRational = Union[Rational, PlusInfinity]

_ZERO = mpq(0)


def _require_scalar(x):
    if not isinstance(x, (PlusInfinity, mpq, int)):
        raise TypeError(f"not an extended rational: {x!r}")


def is_inf(x) -> bool:
    return isinstance(x, PlusInfinity)


def normalize(num, den) -> Rational:
    """num/den in canonical form. Zero denominators raise ZeroDivisionError."""
    return mpq(num, den)


def scalar_lt(a, b) -> bool:
    """a < b in the extended order (INF compares greater than every rational)."""
    if isinstance(a, PlusInfinity):
        return False
    if isinstance(b, PlusInfinity):
        return True
    return a < b


def scalar_le(a, b) -> bool:
    if isinstance(a, PlusInfinity):
        return isinstance(b, PlusInfinity)
    if isinstance(b, PlusInfinity):
        return True
    return a <= b


def scalar_max(values: Iterable) -> ExtendedRational:
    best = None
    for v in values:
        if best is None or scalar_lt(best, v):
            best = v
    if best is None:
        raise ValueError("scalar_max of empty iterable")
    return best


def abs_diff(a, b) -> ExtendedRational:
    """|a - b| with the bottleneck conventions inf-inf = 0, finite vs inf = inf."""
    ia = isinstance(a, PlusInfinity)
    ib = isinstance(b, PlusInfinity)
    if ia and ib:
        return _ZERO
    if ia or ib:
        return INF
    return abs(a - b)


def half(x) -> ExtendedRational:
    if isinstance(x, PlusInfinity):
        return INF
    return x / 2


_RATIONAL_RE = re.compile(r"[+-]?[0-9]+(?:/[0-9]+)?\Z")


def parse_scalar(text: str, allow_inf: bool = False) -> ExtendedRational:
    """Parse `a/b`, a bare integer, or (when allowed) `inf`.

    Decimal notation is rejected rather than silently rounded.
    """
    token = text.strip()
    if token == "inf":
        if allow_inf:
            return INF
        raise ValueError("'inf' is not allowed here")
    if not _RATIONAL_RE.fullmatch(token):
        raise ValueError(f"not a rational literal: {text!r}")
    try:
        return mpq(token)
    except ZeroDivisionError:
        raise ValueError(f"zero denominator: {text!r}") from None


def format_scalar(x) -> str:
    """Inverse of parse_scalar on canonical values: `a/b`, `a`, or `inf`."""
    if isinstance(x, PlusInfinity):
        return "inf"
    return str(mpq(x))
