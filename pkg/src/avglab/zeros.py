"""Zero isolation for the averaged function F(r) = r f(r) on (0, r_max].

Sign changes are bracketed on a geometric grid that is augmented with the
critical points of F (so two nearby zeros cannot hide between grid points),
then refined by bisection-safeguarded Newton.  Exact head and tail series
rules certify that no zeros lie in (0, r_min] or beyond r_max.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import List, Optional, Tuple

import numpy as np
from scipy.optimize import brentq

from .averaged import SQRT_TIMES_BASIS, WEIGHTS_EXACT, RadialFunction
from .exact import PiNumber
from .expressions import SeriesModel, head_rule, tail_rule

DEFAULT_R_MAX = 1e3
DEFAULT_R_MIN = 1e-6
POINTS_PER_DECADE = 120
SIMPLE_TOL = 1e-9
AMBIGUITY_TOL = 1e-13  # a few hundred ulps of the term scale
ROOT_TOL = 1e-12


class ZeroIsolationError(RuntimeError):
    pass


@dataclass
class ZeroInfo:
    bracket: Tuple[float, float]
    root: float
    derivative: float
    derivative_scale: float
    simple: bool

    def to_dict(self) -> dict:
        return {"bracket": list(self.bracket), "root": self.root, "dF": self.derivative,
                "dF_scale": self.derivative_scale, "simple": self.simple}


@dataclass
class ZeroReport:
    interval: Tuple[float, float]
    zeros: List[ZeroInfo] = field(default_factory=list)
    head_rule: Optional[dict] = None
    tail_rule: Optional[dict] = None
    identically_zero: bool = False

    @property
    def roots(self) -> List[float]:
        return [z.root for z in self.zeros]

    @property
    def count(self) -> int:
        return len(self.zeros)

    @property
    def all_simple(self) -> bool:
        return all(z.simple for z in self.zeros)

    @property
    def complete(self) -> bool:
        """True when the head and tail rules exclude zeros outside the grid."""
        return bool(self.head_rule and self.head_rule.get("valid")
                    and self.tail_rule and self.tail_rule.get("valid"))

    def to_dict(self) -> dict:
        return {"interval": list(self.interval), "identically_zero": self.identically_zero,
                "count": self.count, "zeros": [z.to_dict() for z in self.zeros],
                "head_rule": self.head_rule, "tail_rule": self.tail_rule}


@lru_cache(maxsize=None)
def _basis_head(k: int) -> SeriesModel:
    return SQRT_TIMES_BASIS[k].head_model()


@lru_cache(maxsize=None)
def _basis_tail(k: int) -> Tuple[int, SeriesModel]:
    return SQRT_TIMES_BASIS[k].tail_model()


def _combined_models(fn: RadialFunction) -> Tuple[SeriesModel, int, SeriesModel]:
    """Head and tail models of sqrt(1+r^2) F(r) from cached per-basis models."""
    coeffs = [(k, w * PiNumber(v)) for k, (w, v) in enumerate(zip(WEIGHTS_EXACT, fn.nu)) if v]
    head = SeriesModel.zero(1)
    for k, c in coeffs:
        head = head + _basis_head(k).scale(c)
    degree = max(_basis_tail(k)[0] for k, _ in coeffs)
    tail = SeriesModel.zero(1)
    for k, c in coeffs:
        d_k, model = _basis_tail(k)
        tail = tail + model.shift(degree - d_k).scale(c)
    return head, degree, tail


def safeguarded_newton(func, dfunc, lo: float, hi: float, flo: float, fhi: float,
                       tol: float = ROOT_TOL, max_iter: int = 200) -> float:
    """Newton's method kept inside a shrinking sign-change bracket."""
    if flo == 0:
        return lo
    if fhi == 0:
        return hi
    x = 0.5 * (lo + hi)
    for _ in range(max_iter):
        fx = func(x)
        if fx == 0:
            return x
        if (fx < 0) == (flo < 0):
            lo, flo = x, fx
        else:
            hi, fhi = x, fx
        d = dfunc(x)
        step_ok = d != 0
        if step_ok:
            x_new = x - fx / d
            step_ok = lo < x_new < hi
        if not step_ok:
            x_new = 0.5 * (lo + hi)
        if abs(x_new - x) <= tol * max(1.0, abs(x)) or hi - lo <= tol * max(1.0, abs(x)):
            return x_new
        x = x_new
    return x


def isolate_zeros(fn: RadialFunction, interval: Tuple[float, float] = (0.0, DEFAULT_R_MAX),
                  r_min: float = DEFAULT_R_MIN, points_per_decade: int = POINTS_PER_DECADE,
                  simple_tol: float = SIMPLE_TOL, tail: bool = True) -> ZeroReport:
    """All zeros of F in (interval[0], interval[1]] with simplicity flags.

    ``interval[0]`` is normally 0; the grid then starts at ``r_min`` and the
    head rule covers (0, r_min].  Raises :class:`ZeroIsolationError` when a
    critical point of F is too close to zero to separate a double root.
    """
    lo_bound, r_max = float(interval[0]), float(interval[1])
    start = max(lo_bound, r_min)
    report = ZeroReport(interval=(lo_bound, r_max))
    if fn.is_zero():
        report.identically_zero = True
        return report

    n = max(16, int(math.ceil(points_per_decade * math.log10(r_max / start))) + 1)
    grid = np.geomspace(start, r_max, n)
    dvals = fn.dF(grid)

    # critical points of F make every monotone stretch carry at most one zero
    crit = []
    for a, b, da, db in zip(grid[:-1], grid[1:], dvals[:-1], dvals[1:]):
        if da == 0:
            crit.append(a)
        elif da * db < 0:
            crit.append(brentq(fn.dF, a, b, xtol=1e-15, rtol=4 * np.finfo(float).eps))
    for c in crit:
        if abs(fn.F(c)) <= AMBIGUITY_TOL * float(fn.value_scale(c)):
            raise ZeroIsolationError(f"F and F' nearly vanish together at r={c:.12g}: "
                                     "possible double root, cannot separate")
    pts = np.unique(np.concatenate([grid, np.array(crit)]))
    vals = fn.F(pts)

    found = []
    for a, b, fa, fb in zip(pts[:-1], pts[1:], vals[:-1], vals[1:]):
        if fa == 0:
            found.append((a, (a, a)))
        elif fa * fb < 0:
            found.append((safeguarded_newton(fn.F, fn.dF, a, b, fa, fb), (a, b)))
    if vals[-1] == 0:
        found.append((pts[-1], (pts[-1], pts[-1])))
    for root, bracket in found:
        d = fn.dF(root)
        scale = float(fn.derivative_scale(root))
        report.zeros.append(ZeroInfo((float(bracket[0]), float(bracket[1])), float(root), float(d),
                                     scale, abs(d) > simple_tol * scale))

    head, degree, tail_model = _combined_models(fn)
    if lo_bound <= 0 and start <= 1:
        report.head_rule = head_rule(head, start)
    if tail and r_max >= 1:
        report.tail_rule = tail_rule(degree, tail_model, r_max)
    return report
