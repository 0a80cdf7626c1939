"""Exact expressions in r, arctan r and sqrt(1 + r^2), with rigorous enclosures.

An :class:`AtanSqrtExpr` is a finite sum ``sum P_pq(r) * arctan(r)**p *
sqrt(1+r^2)**q`` with ``q`` in {0, 1} and polynomial coefficients in Q[pi].
Three enclosure strategies are provided:

* direct interval evaluation (Horner per polynomial, intersected with the
  mean-value form) for moderate r;
* :class:`SeriesModel` about r = 0 (``head_model``), whose exact low-order
  cancellation makes small-r enclosures possible at all;
* :class:`SeriesModel` in u = 1/r (``tail_model``) for large r.
"""
from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import mpmath

from .exact import FInterval, PiNumber, fi_add, fi_mul
from .interval import Interval

Key = Tuple[int, int]
Poly = Tuple[PiNumber, ...]

DEFAULT_SERIES_TERMS = 30


# -- polynomial helpers over Q[pi] ---------------------------------------------

def _trim(p: Sequence[PiNumber]) -> Poly:
    p = list(p)
    while p and p[-1].is_zero():
        p.pop()
    return tuple(p)


def _padd(a: Sequence[PiNumber], b: Sequence[PiNumber]) -> Poly:
    n = max(len(a), len(b))
    zero = PiNumber(0)
    return _trim([(a[i] if i < len(a) else zero) + (b[i] if i < len(b) else zero) for i in range(n)])


def _pmul(a: Sequence[PiNumber], b: Sequence[PiNumber]) -> Poly:
    if not a or not b:
        return ()
    out = [PiNumber(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x.is_zero():
            continue
        for j, y in enumerate(b):
            if not y.is_zero():
                out[i + j] = out[i + j] + x * y
    return _trim(out)


def _pscale(a: Sequence[PiNumber], c: PiNumber) -> Poly:
    return _trim([x * c for x in a])


def _pderiv(a: Sequence[PiNumber]) -> Poly:
    return _trim([a[m] * m for m in range(1, len(a))])


ONE_PLUS_R2: Poly = (PiNumber(1), PiNumber(0), PiNumber(1))
R_POLY: Poly = (PiNumber(0), PiNumber(1))


class AtanSqrtExpr:
    """sum over (p, q) of P_pq(r) * arctan(r)^p * sqrt(1+r^2)^q."""

    __slots__ = ("terms", "_dcache")

    def __init__(self, terms: Mapping[Key, Sequence] = None):
        clean: Dict[Key, Poly] = {}
        for (p, q), poly in (terms or {}).items():
            if p < 0 or q not in (0, 1):
                raise ValueError(f"unsupported term key {(p, q)}")
            poly = _trim([PiNumber.coerce(c) for c in poly])
            if poly:
                clean[(p, q)] = poly
        self.terms = dict(sorted(clean.items()))
        self._dcache = None

    @classmethod
    def from_monomials(cls, items: Iterable[Tuple[object, int, int, int]]) -> "AtanSqrtExpr":
        """Build from ``(coefficient, m, p, q)`` meaning c * r^m * atan^p * sqrt^q."""
        acc = cls()
        for c, m, p, q in items:
            poly = [PiNumber(0)] * m + [PiNumber.coerce(c)]
            acc = acc + cls({(p, q): poly})
        return acc

    @classmethod
    def constant(cls, c) -> "AtanSqrtExpr":
        return cls({(0, 0): [c]})

    # -- algebra -------------------------------------------------------------
    def __add__(self, other: "AtanSqrtExpr") -> "AtanSqrtExpr":
        out = dict(self.terms)
        for k, poly in other.terms.items():
            out[k] = _padd(out.get(k, ()), poly)
        return AtanSqrtExpr(out)

    def __neg__(self) -> "AtanSqrtExpr":
        return self.scale(-1)

    def __sub__(self, other: "AtanSqrtExpr") -> "AtanSqrtExpr":
        return self + (-other)

    def scale(self, c) -> "AtanSqrtExpr":
        c = PiNumber.coerce(c)
        return AtanSqrtExpr({k: _pscale(p, c) for k, p in self.terms.items()})

    def times_poly(self, poly: Sequence) -> "AtanSqrtExpr":
        poly = [PiNumber.coerce(c) for c in poly]
        return AtanSqrtExpr({k: _pmul(p, poly) for k, p in self.terms.items()})

    def __mul__(self, other) -> "AtanSqrtExpr":
        if not isinstance(other, AtanSqrtExpr):
            return self.scale(other)
        out: Dict[Key, Poly] = {}
        for (p1, q1), a in self.terms.items():
            for (p2, q2), b in other.terms.items():
                prod = _pmul(a, b)
                q = q1 + q2
                if q == 2:  # sqrt(1+r^2)^2
                    prod, q = _pmul(prod, ONE_PLUS_R2), 0
                key = (p1 + p2, q)
                out[key] = _padd(out.get(key, ()), prod)
        return AtanSqrtExpr(out)

    __rmul__ = __mul__

    def scaled_derivative(self) -> "AtanSqrtExpr":
        """(1 + r^2) * d/dr of the expression, again an AtanSqrtExpr."""
        if self._dcache is None:
            out = AtanSqrtExpr()
            for (p, q), poly in self.terms.items():
                part = {(p, q): _pmul(ONE_PLUS_R2, _pderiv(poly))}
                if p:
                    part[(p - 1, q)] = _padd(part.get((p - 1, q), ()), _pscale(poly, PiNumber(p)))
                if q:
                    part[(p, q)] = _padd(part[(p, q)], _pmul(R_POLY, poly))
                out = out + AtanSqrtExpr(part)
            self._dcache = out
        return self._dcache

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        if not isinstance(other, AtanSqrtExpr):
            return NotImplemented
        return (self - other).is_zero()

    def __hash__(self):
        return hash(tuple((k, v) for k, v in self.terms.items()))

    # -- evaluation ----------------------------------------------------------
    def evaluate(self, r: float) -> float:
        """Plain double evaluation (suffers cancellation near r = 0)."""
        a, s = math.atan(r), math.sqrt(1 + r * r)
        total = 0.0
        for (p, q), poly in self.terms.items():
            acc = 0.0
            for c in reversed(poly):
                acc = acc * r + float(c)
            total += acc * a**p * s**q
        return total

    def evaluate_mp(self, r, dps: int = 50):
        """High-precision evaluation with mpmath; returns an mpf."""
        with mpmath.workdps(dps):
            r = mpmath.mpf(r)
            a, s = mpmath.atan(r), mpmath.sqrt(1 + r * r)
            total = mpmath.mpf(0)
            for (p, q), poly in self.terms.items():
                acc = mpmath.mpf(0)
                for c in reversed(poly):
                    acc = acc * r + _pi_to_mp(c)
                total += acc * a**p * s**q
            return +total

    def enclose(self, x: Interval) -> Interval:
        """Naive interval extension (Horner per polynomial)."""
        a = x.atan()
        s = (1 + x * x).sqrt()
        total = Interval(0.0)
        for (p, q), poly in self.terms.items():
            acc = Interval(0.0)
            for iv in reversed(_float_coeffs(poly)):
                acc = acc * x + iv
            total = total + acc * (a**p) * (s**q)
        return total

    def enclose_mean_value(self, x: Interval) -> Interval:
        """Mean-value form intersected with the naive enclosure."""
        naive = self.enclose(x)
        if x.width == 0:
            return naive
        m = Interval(x.mid)
        dx = self.scaled_derivative().enclose(x) / (1 + x * x)
        centered = self.enclose(m) + dx * (x - m)
        return naive.intersect(centered)

    # -- series models ---------------------------------------------------------
    def head_model(self, terms: int = DEFAULT_SERIES_TERMS) -> "SeriesModel":
        """Model in t = r valid on 0 <= r <= 1."""
        atan_s, sqrt_s = head_atan(terms), head_sqrt(terms)
        total = SeriesModel.zero(Fraction(1))
        for (p, q), poly in self.terms.items():
            part = SeriesModel(list(poly), {}, Fraction(1))
            for _ in range(p):
                part = part * atan_s
            if q:
                part = part * sqrt_s
            total = total + part
        return total

    def tail_degree(self) -> int:
        return max(len(poly) - 1 + q for (p, q), poly in self.terms.items())

    def tail_model(self, terms: int = DEFAULT_SERIES_TERMS) -> Tuple[int, "SeriesModel"]:
        """``(D, T)`` with expr(r) = r^D * T(1/r), T valid on 0 <= u <= 1."""
        if self.is_zero():
            return 0, SeriesModel.zero(Fraction(1))
        atan_s, sqrt_s = tail_atan(terms), tail_sqrt(terms)
        big_d = self.tail_degree()
        total = SeriesModel.zero(Fraction(1))
        for (p, q), poly in self.terms.items():
            # r^m sqrt(1+r^2)^q = u^{-(m+q)} sqrt(1+u^2)^q
            rev = [PiNumber(0)] * (big_d + 1)
            for m, c in enumerate(poly):
                rev[big_d - m - q] = rev[big_d - m - q] + c
            part = SeriesModel(rev, {}, Fraction(1))
            for _ in range(p):
                part = part * atan_s
            if q:
                part = part * sqrt_s
            total = total + part
        return big_d, total

    def __str__(self) -> str:
        names = {(0, 0): "", (1, 0): "*atan(r)", (0, 1): "*sqrt(1+r^2)", (1, 1): "*atan(r)*sqrt(1+r^2)"}
        parts = []
        for key, poly in self.terms.items():
            suffix = names.get(key, f"*atan(r)^{key[0]}*sqrt(1+r^2)^{key[1]}")
            for m, c in enumerate(poly):
                if not c.is_zero():
                    parts.append(f"({c})*r^{m}{suffix}")
        return " + ".join(parts) or "0"


def _pi_to_mp(c: PiNumber):
    return sum(mpmath.mpf(v.numerator) / v.denominator * mpmath.pi**i for i, v in enumerate(c.c))


@lru_cache(maxsize=4096)
def _coeff_interval(c: PiNumber) -> Interval:
    lo, hi = c.enclosure()
    return Interval.from_fraction(lo, hi)


def _float_coeffs(poly: Sequence[PiNumber]) -> List[Interval]:
    return [_coeff_interval(c) for c in poly]


# -- series models ------------------------------------------------------------

class SeriesModel:
    """Enclosure of a function of t on [0, radius]:

        f(t) in  sum_n exact[n] t^n  +  sum_n rem[n] t^n

    where ``exact`` are exact Q[pi] coefficients and ``rem`` maps orders to
    rational intervals bounding remainder terms (valid pointwise for each t).
    """

    __slots__ = ("exact", "rem", "radius", "_qcache")

    def __init__(self, exact: Sequence, rem: Mapping[int, FInterval], radius: Fraction):
        self.exact: List[PiNumber] = list(_trim([PiNumber.coerce(c) for c in exact]))
        self.rem: Dict[int, FInterval] = {n: iv for n, iv in rem.items() if iv != (0, 0)}
        self.radius = Fraction(radius)
        self._qcache: Dict[int, List[Interval]] = {}

    @classmethod
    def zero(cls, radius: Fraction) -> "SeriesModel":
        return cls([], {}, radius)

    def __add__(self, other: "SeriesModel") -> "SeriesModel":
        rem = dict(self.rem)
        for n, iv in other.rem.items():
            rem[n] = fi_add(rem[n], iv) if n in rem else iv
        return SeriesModel(_padd(self.exact, other.exact), rem, min(self.radius, other.radius))

    def scale(self, c) -> "SeriesModel":
        c = PiNumber.coerce(c)
        cint = c.enclosure()
        rem = {n: fi_mul(iv, cint) for n, iv in self.rem.items()}
        return SeriesModel(_pscale(self.exact, c), rem, self.radius)

    def shift(self, n: int) -> "SeriesModel":
        """Multiply by t^n."""
        if n == 0:
            return self
        return SeriesModel([PiNumber(0)] * n + self.exact,
                           {m + n: iv for m, iv in self.rem.items()}, self.radius)

    def __mul__(self, other: "SeriesModel") -> "SeriesModel":
        exact = _pmul(self.exact, other.exact)
        rem: Dict[int, FInterval] = {}

        def put(n, iv):
            rem[n] = fi_add(rem[n], iv) if n in rem else iv

        for i, c in enumerate(self.exact):
            if c.is_zero():
                continue
            ci = c.enclosure()
            for n, iv in other.rem.items():
                put(i + n, fi_mul(ci, iv))
        for j, c in enumerate(other.exact):
            if c.is_zero():
                continue
            cj = c.enclosure()
            for n, iv in self.rem.items():
                put(j + n, fi_mul(cj, iv))
        for n1, iv1 in self.rem.items():
            for n2, iv2 in other.rem.items():
                put(n1 + n2, fi_mul(iv1, iv2))
        return SeriesModel(exact, rem, min(self.radius, other.radius))

    def leading_order(self) -> Optional[int]:
        """Lowest order with a nonzero exact coefficient (None if identically 0).

        Raises if a remainder term sits at or below that order, since the
        leading behaviour would then be undetermined.
        """
        k = next((n for n, c in enumerate(self.exact) if not c.is_zero()), None)
        if k is None:
            if self.rem:
                raise ValueError("series model has no exact part; increase the number of terms")
            return None
        if self.rem and min(self.rem) <= k:
            raise ValueError("remainder reaches the leading order; increase the number of terms")
        return k

    def leading_coefficient(self) -> PiNumber:
        k = self.leading_order()
        return PiNumber(0) if k is None else self.exact[k]

    def quotient_coefficients(self, k: int) -> List[Interval]:
        """Float interval coefficients of f(t) / t^k (orders below k must vanish)."""
        if k not in self._qcache:
            n_max = max([len(self.exact) - 1] + list(self.rem))
            out = []
            for n in range(k, n_max + 1):
                lo = hi = Fraction(0)
                if n < len(self.exact):
                    lo, hi = self.exact[n].enclosure()
                if n in self.rem:
                    lo, hi = lo + self.rem[n][0], hi + self.rem[n][1]
                out.append(Interval.from_fraction(lo, hi))
            self._qcache[k] = out
        return self._qcache[k]

    def _check_domain(self, lo: float, hi: float) -> None:
        if lo < 0 or Fraction(hi) > self.radius:
            raise ValueError(f"[{lo}, {hi}] outside the model's validity range [0, {self.radius}]")

    def enclose_quotient(self, lo: float, hi: float, k: Optional[int] = None) -> Interval:
        """Enclosure of f(t)/t^k for t in [lo, hi] (k defaults to the leading order)."""
        self._check_domain(lo, hi)
        if k is None:
            k = self.leading_order() or 0
        t = Interval(lo, hi)
        acc = Interval(0.0)
        for c in reversed(self.quotient_coefficients(k)):
            acc = acc * t + c
        return acc

    def enclose(self, lo: float, hi: float) -> Interval:
        k = self.leading_order() or 0
        return Interval(lo, hi) ** k * self.enclose_quotient(lo, hi, k)


# -- elementary series --------------------------------------------------------

def _binom_half(n: int) -> Fraction:
    c = Fraction(1)
    for k in range(n):
        c *= (Fraction(1, 2) - k) / (k + 1)
    return c


@lru_cache(maxsize=None)
def head_atan(terms: int) -> SeriesModel:
    """arctan t on [0, 1]: alternating series, remainder below the next term."""
    exact = [PiNumber(0)] * (2 * terms + 2)
    for n in range(terms + 1):
        exact[2 * n + 1] = PiNumber(Fraction((-1) ** n, 2 * n + 1))
    bound = Fraction(1, 2 * terms + 3)
    return SeriesModel(exact, {2 * terms + 3: (-bound, bound)}, Fraction(1))


@lru_cache(maxsize=None)
def head_sqrt(terms: int) -> SeriesModel:
    """sqrt(1 + t^2) on [0, 1]; the binomial series alternates from n = 1."""
    exact = [PiNumber(0)] * (2 * terms + 1)
    for n in range(terms + 1):
        exact[2 * n] = PiNumber(_binom_half(n))
    bound = abs(_binom_half(terms + 1))
    return SeriesModel(exact, {2 * terms + 2: (-bound, bound)}, Fraction(1))


@lru_cache(maxsize=None)
def tail_atan(terms: int) -> SeriesModel:
    """arctan(1/u) = pi/2 - arctan(u) on 0 < u <= 1."""
    base = head_atan(terms).scale(-1)
    return base + SeriesModel([PiNumber(0, Fraction(1, 2))], {}, Fraction(1))


@lru_cache(maxsize=None)
def tail_sqrt(terms: int) -> SeriesModel:
    """sqrt(1 + u^2); the factor 1/u of sqrt(1 + r^2) is carried by the shift."""
    return head_sqrt(terms)


# -- head / tail sign rules -----------------------------------------------------

def head_rule(model: SeriesModel, r_lo: float) -> dict:
    """Sign of f on (0, r_lo] from a head model f(r) = r^k Q(r)."""
    k = model.leading_order()
    if k is None:
        return {"kind": "maclaurin", "valid": False, "reason": "identically zero"}
    if r_lo > model.radius:
        return {"kind": "maclaurin", "valid": False, "reason": "r_lo beyond series radius"}
    q = model.enclose_quotient(0.0, r_lo, k)
    return {
        "kind": "maclaurin", "variable": "r", "range": [0.0, r_lo],
        "leading_order": k, "leading_coefficient": str(model.exact[k]),
        "remainder_order": min(model.rem) if model.rem else None,
        "quotient_enclosure": [q.lo, q.hi], "sign": q.sign(), "valid": q.sign() != 0,
    }


def tail_rule(degree: int, model: SeriesModel, r_hi: float) -> dict:
    """Sign of f on [r_hi, oo) from f(r) = r^D T(1/r), T(u) = u^k Q(u)."""
    k = model.leading_order()
    if k is None:
        return {"kind": "asymptotic", "valid": False, "reason": "identically zero"}
    u_max = (Interval(1.0) / Interval(r_hi)).hi
    if u_max > model.radius:
        return {"kind": "asymptotic", "valid": False, "reason": "r_hi below 1"}
    q = model.enclose_quotient(0.0, u_max, k)
    return {
        "kind": "asymptotic", "variable": "u=1/r", "range": [r_hi, "inf"],
        "growth_degree": degree - k, "leading_coefficient": str(model.exact[k]),
        "remainder_order": min(model.rem) if model.rem else None,
        "quotient_enclosure": [q.lo, q.hi], "sign": q.sign(), "valid": q.sign() != 0,
    }
