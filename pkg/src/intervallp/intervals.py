"""Exact rational intervals and their center/radius/endpoint structure.

Everything here works on :class:`fractions.Fraction`; floats are rejected at
the boundary. Interval vectors and matrices are plain (nested) tuples of
:class:`Interval`.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence, Union

# Extended rationals are Fractions or the float infinities; Python orders
# Fraction against math.inf correctly, which is all we need.
NEG_INF = -math.inf
POS_INF = math.inf
ExtRational = Union[Fraction, float]

DEFAULT_CAP = 256


class EnumerationCapExceeded(RuntimeError):
    """Raised when an endpoint enumeration would exceed its cap."""

    def __init__(self, count: int, cap: int):
        super().__init__(f"{count} endpoint scenarios exceed cap {cap}")
        self.count = count
        self.cap = cap


def to_rational(value) -> Fraction:
    """Convert an int, Fraction or ``"p/q"`` string to a Fraction.

    Floats are refused so that no inexact data can enter the core.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if not text or any(ch in text for ch in ".eE"):
            raise ValueError(f"not an exact rational: {value!r}")
        return Fraction(text)
    raise TypeError(f"cannot use {type(value).__name__} as an exact rational")


def format_rational(q: Fraction) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def is_infinite(v: ExtRational) -> bool:
    return isinstance(v, float) and math.isinf(v)


def format_extended(v: ExtRational) -> str:
    if is_infinite(v):
        return "+inf" if v > 0 else "-inf"
    return format_rational(v)


def parse_extended(text: str) -> ExtRational:
    if text in ("+inf", "inf"):
        return POS_INF
    if text == "-inf":
        return NEG_INF
    return to_rational(text)


def neg_extended(v: ExtRational) -> ExtRational:
    return -v


@dataclass(frozen=True)
class Interval:
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        lo, hi = to_rational(self.lo), to_rational(self.hi)
        if lo > hi:
            raise ValueError(f"interval lower bound {lo} exceeds upper bound {hi}")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @classmethod
    def point(cls, value) -> "Interval":
        v = to_rational(value)
        return cls(v, v)

    @property
    def center(self) -> Fraction:
        return (self.hi + self.lo) / 2

    @property
    def radius(self) -> Fraction:
        return (self.hi - self.lo) / 2

    @property
    def is_degenerate(self) -> bool:
        return self.lo == self.hi

    def contains(self, x) -> bool:
        return self.lo <= to_rational(x) <= self.hi

    def intersects(self, other: "Interval") -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def __neg__(self) -> "Interval":
        return Interval(-self.hi, -self.lo)

    def endpoints(self) -> tuple[Fraction, ...]:
        return (self.lo,) if self.is_degenerate else (self.lo, self.hi)

    def to_json(self):
        if self.is_degenerate:
            return format_rational(self.lo)
        return [format_rational(self.lo), format_rational(self.hi)]

    @classmethod
    def from_json(cls, data) -> "Interval":
        if isinstance(data, (list, tuple)):
            if len(data) != 2:
                raise ValueError(f"interval must have two bounds, got {data!r}")
            return cls(to_rational(data[0]), to_rational(data[1]))
        return cls.point(data)

    def __str__(self) -> str:
        if self.is_degenerate:
            return format_rational(self.lo)
        return f"[{format_rational(self.lo)}, {format_rational(self.hi)}]"


IntervalLike = Union[Interval, Sequence["IntervalLike"]]


def center(obj: IntervalLike):
    """Elementwise midpoint of an interval, interval vector or matrix."""
    if isinstance(obj, Interval):
        return obj.center
    return tuple(center(item) for item in obj)


def radius(obj: IntervalLike):
    """Elementwise half-width; always non-negative."""
    if isinstance(obj, Interval):
        return obj.radius
    return tuple(radius(item) for item in obj)


def contains(iv: Interval, x) -> bool:
    return iv.contains(x)


def interval_dot_range(a: Sequence[Interval], x: Sequence[Fraction]) -> Interval:
    """Exact range of ``a @ x`` over all ``a`` in the interval vector."""
    if len(a) != len(x):
        raise ValueError(f"dimension mismatch: {len(a)} coefficients, {len(x)} values")
    lo = hi = Fraction(0)
    for aj, xj in zip(a, x):
        p, q = aj.lo * xj, aj.hi * xj
        lo += min(p, q)
        hi += max(p, q)
    return Interval(lo, hi)


def endpoint_count(intervals: Iterable[Interval]) -> int:
    return 2 ** sum(1 for iv in intervals if not iv.is_degenerate)


def endpoint_scenarios(
    intervals: Sequence[Interval], cap: int | None = DEFAULT_CAP
) -> Iterator[tuple[Fraction, ...]]:
    """Yield every lo/hi assignment of the non-degenerate entries.

    Degenerate entries stay fixed. The first entry varies slowest and the
    lower endpoint comes first.
    """
    count = endpoint_count(intervals)
    if cap is not None and count > cap:
        raise EnumerationCapExceeded(count, cap)
    return itertools.product(*(iv.endpoints() for iv in intervals))
