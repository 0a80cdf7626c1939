"""The first-order averaged function and its generating basis.

    F(r) = r f(r) = 2 nu1 r + pi nu2 r^2 + pi nu3 r^2/sqrt(1+r^2)
                  + pi nu4 r^4/sqrt(1+r^2) + 2 nu5 arctan r
                  + 2 nu6 r^2 arctan r + pi nu7 (1 - 1/sqrt(1+r^2))

The basis functions f1..f7 are kept unweighted; the multipliers
(2, pi, pi, pi, 2, 2, pi) live in ``WEIGHTS``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Union

import mpmath
import numpy as np

from . import jets
from .coefficients import MONOMIALS, NuVector, PerturbationCoefficients
from .exact import PiNumber
from .expressions import AtanSqrtExpr
from .integrals import adaptive_quad

ArrayLike = Union[float, np.ndarray]

BASIS_LABELS = (
    "r", "r^2", "r^2/sqrt(1+r^2)", "r^4/sqrt(1+r^2)", "arctan r", "r^2 arctan r",
    "1 - 1/sqrt(1+r^2)",
)
WEIGHTS_EXACT = (PiNumber(2), PiNumber.pi(), PiNumber.pi(), PiNumber.pi(),
                 PiNumber(2), PiNumber(2), PiNumber.pi())
WEIGHTS = np.array([float(w) for w in WEIGHTS_EXACT])
MAX_ORDER = 6

# sqrt(1+r^2) * f_k as exact expressions (coef, m, p, q)
SQRT_TIMES_BASIS = (
    AtanSqrtExpr.from_monomials([(1, 1, 0, 1)]),
    AtanSqrtExpr.from_monomials([(1, 2, 0, 1)]),
    AtanSqrtExpr.from_monomials([(1, 2, 0, 0)]),
    AtanSqrtExpr.from_monomials([(1, 4, 0, 0)]),
    AtanSqrtExpr.from_monomials([(1, 0, 1, 1)]),
    AtanSqrtExpr.from_monomials([(1, 2, 1, 1)]),
    AtanSqrtExpr.from_monomials([(1, 0, 0, 1), (-1, 0, 0, 0)]),
)


def _check_k(k: int) -> None:
    if k not in range(1, 8):
        raise ValueError(f"basis index must be 1..7, got {k}")


def basis_jet(k: int, r, order: int, backend: jets.Backend = jets.FLOAT) -> List:
    """Taylor coefficients of f_k about r up to ``order``."""
    _check_k(k)
    x = jets.variable(r, order)
    if k == 1:
        return x
    x2 = jets.mul(x, x)
    if k == 2:
        return x2
    if k in (5, 6):
        a = jets.atan(x, backend)
        return a if k == 5 else jets.mul(x2, a)
    inv_s = jets.power(jets.add(jets.constant(1, x), x2), Fraction(-1, 2), backend)
    if k == 3:
        return jets.mul(x2, inv_s)
    if k == 4:
        return jets.mul(jets.mul(x2, x2), inv_s)
    return jets.sub(jets.constant(1, x), inv_s)


def basis_derivatives(k: int, r, n: int, backend: jets.Backend = jets.FLOAT) -> List:
    """[f_k(r), f_k'(r), ..., f_k^(n)(r)]."""
    return jets.derivatives(basis_jet(k, r, n, backend))


def eval_basis(k: int, r: float, order: int = 0) -> float:
    """f_k(r) or its ``order``-th derivative, r >= 0, order <= 6."""
    _check_k(k)
    if not 0 <= order <= MAX_ORDER:
        raise ValueError(f"derivative order must be 0..{MAX_ORDER}")
    r = float(r)
    if r < 0:
        raise ValueError("r must be nonnegative")
    if order == 0 and k == 7:
        s = math.sqrt(1 + r * r)
        return r * r / (s * (1 + s))
    return basis_derivatives(k, r, order)[order]


def basis_values(r: ArrayLike, order: int = 0) -> np.ndarray:
    """Vectorized f_k (order 0) or f_k' (order 1); shape (7,) + shape(r)."""
    r = np.asarray(r, dtype=float)
    r2 = r * r
    s = np.sqrt(1 + r2)
    at = np.arctan(r)
    if order == 0:
        return np.stack([r, r2, r2 / s, r2 * r2 / s, at, r2 * at, r2 / (s * (1 + s))])
    if order == 1:
        s3 = s**3
        return np.stack([np.ones_like(r), 2 * r, r * (r2 + 2) / s3, r2 * r * (3 * r2 + 4) / s3,
                         1 / (1 + r2), 2 * r * at + r2 / (1 + r2), r / s3])
    raise ValueError("vectorized evaluation supports order 0 and 1; use eval_basis")


@dataclass(frozen=True)
class RadialFunction:
    """F(r) = sum_k w_k nu_k f_k(r) for a fixed NuVector."""

    nu: NuVector
    coeffs: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not isinstance(self.nu, NuVector):
            object.__setattr__(self, "nu", NuVector(tuple(self.nu)))
        object.__setattr__(self, "coeffs", WEIGHTS * np.array(self.nu.as_floats()))

    @property
    def weights(self) -> np.ndarray:
        return WEIGHTS

    def is_zero(self) -> bool:
        return self.nu.is_zero()

    def F(self, r: ArrayLike) -> ArrayLike:
        out = np.tensordot(self.coeffs, basis_values(r, 0), axes=1)
        return float(out) if np.ndim(out) == 0 else out

    def dF(self, r: ArrayLike) -> ArrayLike:
        out = np.tensordot(self.coeffs, basis_values(r, 1), axes=1)
        return float(out) if np.ndim(out) == 0 else out

    def derivative(self, r: float, order: int) -> float:
        return float(sum(c * eval_basis(k, r, order) for k, c in enumerate(self.coeffs, 1) if c))

    def f(self, r: ArrayLike) -> ArrayLike:
        r_arr = np.asarray(r, dtype=float)
        small = r_arr < 1e-8
        safe = np.where(small, 1.0, r_arr)
        out = np.where(small, self.f0(), np.asarray(self.F(safe)) / safe)
        return float(out) if np.ndim(out) == 0 else out

    def f0(self) -> float:
        """Limit of f at r -> 0+, namely 2 nu1 + 2 nu5."""
        return float(2 * self.nu[0] + 2 * self.nu[4])

    def value_scale(self, r: ArrayLike) -> ArrayLike:
        """sum_k |w_k nu_k f_k(r)|; the size of F before cancellation."""
        return np.tensordot(np.abs(self.coeffs), np.abs(basis_values(r, 0)), axes=1)

    def derivative_scale(self, r: ArrayLike) -> ArrayLike:
        return np.tensordot(np.abs(self.coeffs), np.abs(basis_values(r, 1)), axes=1)

    def F_mp(self, r, dps: int = 40):
        """F(r) and F'(r) in mpmath at ``dps`` digits (returns a pair of mpf)."""
        with mpmath.workdps(dps):
            x = mpmath.mpf(r)
            val = der = mpmath.mpf(0)
            for k, (w, v) in enumerate(zip(WEIGHTS_EXACT, self.nu), 1):
                if v:
                    c = _pi_mp(w) * mpmath.mpf(v.numerator) / v.denominator
                    d = basis_derivatives(k, x, 1, jets.MP)
                    val += c * d[0]
                    der += c * d[1]
            return val, der

    def sqrt_times_F(self) -> AtanSqrtExpr:
        """sqrt(1+r^2) * F(r) as an exact expression."""
        acc = AtanSqrtExpr()
        for w, v, e in zip(WEIGHTS_EXACT, self.nu, SQRT_TIMES_BASIS):
            if v:
                acc = acc + e.scale(w * v)
        return acc


def _pi_mp(c: PiNumber):
    return sum(mpmath.mpf(v.numerator) / v.denominator * mpmath.pi**i for i, v in enumerate(c.c))


def eval_F(fn: RadialFunction, r: ArrayLike) -> ArrayLike:
    r_arr = np.asarray(r, dtype=float)
    if np.any(r_arr < 0):
        raise ValueError("r must be nonnegative")
    return fn.F(r)


def eval_f(fn: RadialFunction, r: ArrayLike) -> ArrayLike:
    r_arr = np.asarray(r, dtype=float)
    if np.any(r_arr <= 0):
        raise ValueError("f is evaluated on r > 0")
    return fn.f(r)


def eval_dF(fn: RadialFunction, r: float, order: int = 1) -> float:
    if order == 1:
        return fn.dF(r)
    return fn.derivative(r, order)


# -- direct quadrature oracle ---------------------------------------------------

def _poly_xy(table, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    out = np.zeros_like(x)
    for (i, j) in MONOMIALS:
        c = table[(i, j)]
        if c:
            out = out + float(c) * x**i * y**j
    return out


def polar_integrand(coeffs: PerturbationCoefficients, side: int, r: float):
    """theta -> (cos P_k + sin Q_k)(r cos, r sin) / (r^2 cos^2 + 1), vectorized."""
    a, b = coeffs.a(side), coeffs.b(side)

    def integrand(t):
        c, s = np.cos(t), np.sin(t)
        x, y = r * c, r * s
        return (c * _poly_xy(a, x, y) + s * _poly_xy(b, x, y)) / (r * r * c * c + 1)

    return integrand


def direct_average(coeffs: PerturbationCoefficients, r: float, abs_tol: float = 1e-11) -> float:
    """f(r) by adaptive quadrature of the piecewise first-order integrand."""
    if not r > 0:
        raise ValueError("r must be positive")
    upper = adaptive_quad(polar_integrand(coeffs, 1, r), 0.0, math.pi, abs_tol=abs_tol)[0]
    lower = adaptive_quad(polar_integrand(coeffs, 2, r), math.pi, 2 * math.pi, abs_tol=abs_tol)[0]
    return upper + lower
