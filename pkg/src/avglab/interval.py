"""Floating-point interval arithmetic with outward rounding.

Every arithmetic result is computed in round-to-nearest and then widened by
one ulp in each direction (``math.nextafter``), which is sound for the
correctly rounded IEEE operations +, -, *, / and sqrt.  ``arctan`` comes from
libm and is only faithfully rounded, so it is widened by two ulps.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Union

Number = Union[int, float]

_INF = math.inf


def _down(x: float) -> float:
    return math.nextafter(x, -_INF)


def _up(x: float) -> float:
    return math.nextafter(x, _INF)


def _exact_float(x) -> float:
    f = float(x)
    if isinstance(x, int) and int(f) != x:
        raise ValueError(f"integer {x} is not exactly representable; use Interval.from_fraction")
    return f


class Interval:
    __slots__ = ("lo", "hi")

    def __init__(self, lo: Number, hi: Number = None):
        lo = _exact_float(lo)
        hi = lo if hi is None else _exact_float(hi)
        if not lo <= hi:
            raise ValueError(f"empty interval [{lo}, {hi}]")
        self.lo = lo
        self.hi = hi

    @classmethod
    def from_fraction(cls, lo: Fraction, hi: Fraction = None) -> "Interval":
        """Smallest-ish float interval containing the rational interval."""
        hi = lo if hi is None else hi
        flo, fhi = float(lo), float(hi)
        if Fraction(flo) > lo:
            flo = _down(flo)
        if Fraction(fhi) < hi:
            fhi = _up(fhi)
        return cls(flo, fhi)

    @classmethod
    def _raw(cls, lo: float, hi: float) -> "Interval":
        iv = object.__new__(cls)
        iv.lo = lo
        iv.hi = hi
        return iv

    @staticmethod
    def coerce(x) -> "Interval":
        if isinstance(x, Interval):
            return x
        if isinstance(x, Fraction):
            return Interval.from_fraction(x)
        return Interval(x)

    # -- queries -----------------------------------------------------------
    def contains(self, x: float) -> bool:
        return self.lo <= x <= self.hi

    def contains_zero(self) -> bool:
        return self.lo <= 0.0 <= self.hi

    def sign(self) -> int:
        """+1 or -1 when the interval excludes zero, else 0."""
        if self.lo > 0:
            return 1
        if self.hi < 0:
            return -1
        return 0

    @property
    def width(self) -> float:
        return self.hi - self.lo

    @property
    def mid(self) -> float:
        return 0.5 * (self.lo + self.hi)

    def intersect(self, other: "Interval") -> "Interval":
        lo, hi = max(self.lo, other.lo), min(self.hi, other.hi)
        if lo > hi:
            raise ValueError("disjoint enclosures: inconsistent interval evaluation")
        return Interval._raw(lo, hi)

    # -- arithmetic --------------------------------------------------------
    def __neg__(self) -> "Interval":
        return Interval._raw(-self.hi, -self.lo)

    def __add__(self, other) -> "Interval":
        o = Interval.coerce(other)
        return Interval._raw(_down(self.lo + o.lo), _up(self.hi + o.hi))

    __radd__ = __add__

    def __sub__(self, other) -> "Interval":
        o = Interval.coerce(other)
        return Interval._raw(_down(self.lo - o.hi), _up(self.hi - o.lo))

    def __rsub__(self, other) -> "Interval":
        return Interval.coerce(other) - self

    def __mul__(self, other) -> "Interval":
        o = Interval.coerce(other)
        a, b, c, d = self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi
        return Interval._raw(_down(min(a, b, c, d)), _up(max(a, b, c, d)))

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Interval":
        o = Interval.coerce(other)
        if o.contains_zero():
            raise ZeroDivisionError("interval division by an interval containing 0")
        a, b, c, d = self.lo / o.lo, self.lo / o.hi, self.hi / o.lo, self.hi / o.hi
        return Interval._raw(_down(min(a, b, c, d)), _up(max(a, b, c, d)))

    def __rtruediv__(self, other) -> "Interval":
        return Interval.coerce(other) / self

    def __pow__(self, n: int) -> "Interval":
        if not isinstance(n, int) or n < 0:
            raise ValueError("only nonnegative integer powers")
        if n == 0:
            return Interval(1.0)
        if n % 2 == 0 and self.contains_zero():
            m = max(-self.lo, self.hi)
            top = Interval(m) ** n
            return Interval._raw(0.0, top.hi)
        if n % 2 == 0 and self.hi < 0:
            return (-self) ** n
        result = Interval(1.0)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def sqrt(self) -> "Interval":
        if self.hi < 0:
            raise ValueError("sqrt of a negative interval")
        lo = 0.0 if self.lo <= 0 else max(0.0, _down(math.sqrt(self.lo)))
        return Interval._raw(lo, _up(math.sqrt(self.hi)))

    def atan(self) -> "Interval":
        return Interval._raw(_down(_down(math.atan(self.lo))), _up(_up(math.atan(self.hi))))

    def __repr__(self) -> str:
        return f"Interval({self.lo!r}, {self.hi!r})"
