"""Exact rational scalars and closed rational intervals.

All certified arithmetic in the package runs on :class:`fractions.Fraction`,
which is always kept in lowest terms.  Intervals carry exact endpoints, so
interval operations need no outward rounding.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Union

from .errors import EmptyIntersection, EmptyInterval, ParseError

ExactRational = Fraction
RationalLike = Union[int, Fraction, str]

_RATIONAL_RE = re.compile(
    r"""
    [+-]?(
        \d+\s*/\s*\d+                    # p/q
      | (\d+\.?\d*|\.\d+)([eE][+-]?\d+)? # finite decimal, optional exponent
    )
    """,
    re.VERBOSE,
)


def parse_rational(text: str) -> Fraction:
    """Parse ``p/q`` or a finite decimal literal exactly.

    >>> parse_rational("355/113")
    Fraction(355, 113)
    >>> parse_rational("1e-3")
    Fraction(1, 1000)
    """
    if not isinstance(text, str):
        raise ParseError(f"expected a string, got {type(text).__name__}")
    s = text.strip()
    if not _RATIONAL_RE.fullmatch(s):
        raise ParseError(f"not an exact rational literal: {text!r}")
    try:
        return Fraction(s.replace(" ", ""))
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"not an exact rational literal: {text!r}") from exc


def as_rational(value: RationalLike) -> Fraction:
    """Coerce ints, Fractions and exact literals; floats are refused."""
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    raise TypeError(f"cannot use {type(value).__name__} as an exact rational")


def fmt(q: Fraction) -> str:
    """Serialize a rational as ``p/q`` (integers as ``p``)."""
    return str(q)


def to_decimal(q: Fraction, digits: int = 16) -> str:
    """Truncated decimal rendering.  Not certified: display only."""
    sign = "-" if q < 0 else ""
    q = abs(q)
    whole, rem = divmod(q.numerator, q.denominator)
    out = []
    for _ in range(digits):
        rem *= 10
        d, rem = divmod(rem, q.denominator)
        out.append(str(d))
    return f"{sign}{whole}." + "".join(out) if digits else f"{sign}{whole}"


class Ordering(enum.Enum):
    LT = -1
    EQ = 0
    GT = 1


def compare(x: Fraction, y: Fraction) -> Ordering:
    # cross-multiplication; denominators are positive
    lhs = x.numerator * y.denominator
    rhs = y.numerator * x.denominator
    if lhs < rhs:
        return Ordering.LT
    if lhs > rhs:
        return Ordering.GT
    return Ordering.EQ


@dataclass(frozen=True)
class RatInterval:
    """Closed interval ``[lo, hi]`` with exact rational endpoints."""

    lo: Fraction
    hi: Fraction

    def __init__(self, lo: RationalLike, hi: RationalLike | None = None):
        lo = as_rational(lo)
        hi = lo if hi is None else as_rational(hi)
        if lo > hi:
            raise EmptyInterval(f"empty interval [{lo}, {hi}]")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @classmethod
    def parse(cls, text: str) -> "RatInterval":
        """Parse ``a,b`` (or ``[a, b]``)."""
        s = text.strip().strip("[]")
        parts = [p for p in re.split(r"[,\s]+", s) if p]
        if len(parts) != 2:
            raise ParseError(f"expected two endpoints, got {text!r}")
        return cls(parse_rational(parts[0]), parse_rational(parts[1]))

    @classmethod
    def hull_of(cls, values: Iterable[Fraction]) -> "RatInterval":
        vals = list(values)
        if not vals:
            raise EmptyInterval("hull of no values")
        return cls(min(vals), max(vals))

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    @property
    def is_degenerate(self) -> bool:
        return self.lo == self.hi

    def contains(self, x: Fraction) -> bool:
        return self.lo <= x <= self.hi

    def contains_strictly(self, x: Fraction) -> bool:
        return self.lo < x < self.hi

    def contains_interval(self, other: "RatInterval") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    def __contains__(self, x) -> bool:
        if isinstance(x, RatInterval):
            return self.contains_interval(x)
        return self.contains(x)

    def __add__(self, other):
        if isinstance(other, RatInterval):
            return RatInterval(self.lo + other.lo, self.hi + other.hi)
        c = as_rational(other)
        return RatInterval(self.lo + c, self.hi + c)

    __radd__ = __add__

    def __neg__(self):
        return RatInterval(-self.hi, -self.lo)

    def __sub__(self, other):
        if isinstance(other, RatInterval):
            return RatInterval(self.lo - other.hi, self.hi - other.lo)
        c = as_rational(other)
        return RatInterval(self.lo - c, self.hi - c)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, RatInterval):
            ps = (self.lo * other.lo, self.lo * other.hi,
                  self.hi * other.lo, self.hi * other.hi)
            return RatInterval(min(ps), max(ps))
        c = as_rational(other)
        if c >= 0:
            return RatInterval(self.lo * c, self.hi * c)
        return RatInterval(self.hi * c, self.lo * c)

    __rmul__ = __mul__

    def hull(self, other: "RatInterval") -> "RatInterval":
        return RatInterval(min(self.lo, other.lo), max(self.hi, other.hi))

    def intersect(self, other: "RatInterval") -> "RatInterval":
        lo, hi = max(self.lo, other.lo), min(self.hi, other.hi)
        if lo > hi:
            raise EmptyIntersection(f"{self} and {other} are disjoint")
        return RatInterval(lo, hi)

    def meets(self, other: "RatInterval") -> bool:
        return max(self.lo, other.lo) <= min(self.hi, other.hi)

    def bisect(self) -> tuple["RatInterval", "RatInterval"]:
        m = self.midpoint
        return RatInterval(self.lo, m), RatInterval(m, self.hi)

    def to_json(self) -> list[str]:
        return [fmt(self.lo), fmt(self.hi)]

    def __str__(self) -> str:
        return f"[{self.lo}, {self.hi}]"

    def __repr__(self) -> str:
        return f"RatInterval({self.lo!s}, {self.hi!s})"


_OPS = {
    "add": RatInterval.__add__,
    "sub": RatInterval.__sub__,
    "mul": RatInterval.__mul__,
    "hull": RatInterval.hull,
    "intersect": RatInterval.intersect,
}


def interval_arith(op: str, x: RatInterval, y: RatInterval) -> RatInterval:
    """Apply ``op`` in {add, sub, mul, hull, intersect}.

    ``intersect`` raises :class:`EmptyIntersection` for disjoint inputs.
    """
    try:
        fn = _OPS[op]
    except KeyError:
        raise ValueError(f"unknown interval op {op!r}") from None
    return fn(x, y)
