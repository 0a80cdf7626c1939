"""Exact scalars used by the symbolic and certification layers.

``PiNumber`` holds values of the form ``c0 + c1*pi + c2*pi**2`` with rational
``c_i``.  Coefficients of the averaged function carry factors of pi, and the
large-r expansion of ``arctan`` contributes ``pi/2``; keeping pi symbolic lets
exact cancellations be detected as exact zeros.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Tuple, Union

# 3.14159265358979323846 < pi < 3.14159265358979323847
PI_LO = Fraction(314159265358979323846, 10**20)
PI_HI = Fraction(314159265358979323847, 10**20)

Rational = Union[int, Fraction]
FInterval = Tuple[Fraction, Fraction]

MAX_PI_DEGREE = 2


def as_fraction(x) -> Fraction:
    """Convert ints, Fractions, floats (exactly) and 'p/q' strings."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, float)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot convert {type(x).__name__} to Fraction")


def format_fraction(x: Fraction) -> str:
    """Rational string 'p/q' (always with a denominator)."""
    x = as_fraction(x)
    return f"{x.numerator}/{x.denominator}"


# -- rational interval helpers ------------------------------------------------

def fi_add(a: FInterval, b: FInterval) -> FInterval:
    return (a[0] + b[0], a[1] + b[1])


def fi_mul(a: FInterval, b: FInterval) -> FInterval:
    p = (a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1])
    return (min(p), max(p))


def fi_scale(a: FInterval, c: Fraction) -> FInterval:
    lo, hi = a[0] * c, a[1] * c
    return (lo, hi) if lo <= hi else (hi, lo)


def fi_hull(a: FInterval, b: FInterval) -> FInterval:
    return (min(a[0], b[0]), max(a[1], b[1]))


class PiNumber:
    """Exact element of Q[pi] restricted to degree <= 2 in pi."""

    __slots__ = ("c",)

    def __init__(self, *coeffs: Rational):
        c = [as_fraction(v) for v in coeffs] or [Fraction(0)]
        while len(c) > 1 and c[-1] == 0:
            c.pop()
        if len(c) - 1 > MAX_PI_DEGREE:
            raise OverflowError("PiNumber degree in pi exceeds 2")
        self.c: Tuple[Fraction, ...] = tuple(c)

    @classmethod
    def coerce(cls, x) -> "PiNumber":
        if isinstance(x, PiNumber):
            return x
        return cls(as_fraction(x))

    @classmethod
    def pi(cls, k: Rational = 1) -> "PiNumber":
        return cls(0, k)

    def is_zero(self) -> bool:
        return all(v == 0 for v in self.c)

    def is_rational(self) -> bool:
        return len(self.c) == 1

    def __add__(self, other) -> "PiNumber":
        o = PiNumber.coerce(other)
        n = max(len(self.c), len(o.c))
        return PiNumber(*[(self.c[i] if i < len(self.c) else 0) + (o.c[i] if i < len(o.c) else 0)
                          for i in range(n)])

    __radd__ = __add__

    def __neg__(self) -> "PiNumber":
        return PiNumber(*[-v for v in self.c])

    def __sub__(self, other) -> "PiNumber":
        return self + (-PiNumber.coerce(other))

    def __rsub__(self, other) -> "PiNumber":
        return PiNumber.coerce(other) - self

    def __mul__(self, other) -> "PiNumber":
        o = PiNumber.coerce(other)
        if len(o.c) == 1:
            s = o.c[0]
            return PiNumber(*[v * s for v in self.c])
        out = [Fraction(0)] * (len(self.c) + len(o.c) - 1)
        for i, u in enumerate(self.c):
            if u:
                for j, v in enumerate(o.c):
                    out[i + j] += u * v
        return PiNumber(*out)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        try:
            return self.c == PiNumber.coerce(other).c
        except TypeError:
            return NotImplemented

    def __hash__(self) -> int:
        return hash(self.c)

    def __float__(self) -> float:
        import math
        return float(sum(float(v) * math.pi**i for i, v in enumerate(self.c)))

    def enclosure(self) -> FInterval:
        """Rational interval containing the exact value."""
        if len(self.c) == 1:
            return (self.c[0], self.c[0])
        acc: FInterval = (self.c[0], self.c[0])
        pik: FInterval = (Fraction(1), Fraction(1))
        for v in self.c[1:]:
            pik = fi_mul(pik, (PI_LO, PI_HI))
            acc = fi_add(acc, fi_scale(pik, v))
        return acc

    def __repr__(self) -> str:
        return f"PiNumber{tuple(str(v) for v in self.c)}"

    def __str__(self) -> str:
        parts = []
        for i, v in enumerate(self.c):
            if v == 0 and len(self.c) > 1:
                continue
            s = str(v)
            parts.append(s if i == 0 else f"{s}*pi" if i == 1 else f"{s}*pi^{i}")
        return " + ".join(parts) or "0"


def pi_sum(values: Iterable) -> PiNumber:
    acc = PiNumber(0)
    for v in values:
        acc = acc + v
    return acc
