"""Direct simulation of the piecewise cubic perturbation and its return map.

In polar coordinates the switching line y = 0 is theta in {0, pi}, so each
half revolution is a smooth problem with theta as the independent variable:

    dr/dtheta = eps (c P + s Q) / (r^2 c^2 + 1 + (eps/r)(c Q - s P))

with (P, Q) = (P_1, Q_1) on (0, pi) and (P_2, Q_2) on (pi, 2 pi).  The full
quotient is integrated, not its first-order truncation.  A Cartesian
integrator with event location on y = 0 serves as an independent oracle.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import brentq

from .averaged import RadialFunction, direct_average
from .coefficients import MONOMIALS, PerturbationCoefficients, nu_from_ab
from .zeros import isolate_zeros

RTOL = 1e-12
ATOL = 1e-14
EPS_LADDER = (1e-2, 1e-3, 5e-4)
DEFECT_RATIO = (1.7, 2.3)


class ThetaSignError(RuntimeError):
    """The angular velocity lost its sign: the flow does not cross y = 0 transversally."""


class IntegrationError(RuntimeError):
    pass


@dataclass(frozen=True)
class SystemInstance:
    """Normalized system (a = 1).  ``a_scale`` maps normalized radii back: r_orig = |a| r."""

    coeffs: PerturbationCoefficients
    epsilon: float = 0.0
    a_scale: float = 1.0

    def __post_init__(self):
        if not math.isfinite(self.epsilon):
            raise ValueError("epsilon must be finite")
        if self.a_scale == 0 or not math.isfinite(self.a_scale):
            raise ValueError("a must be nonzero")

    def with_epsilon(self, eps: float) -> "SystemInstance":
        return SystemInstance(self.coeffs, eps, self.a_scale)

    def original_radius(self, r: float) -> float:
        return abs(self.a_scale) * r

    def polynomials(self, side: int):
        return _Poly(self.coeffs.a(side)), _Poly(self.coeffs.b(side))


class _Poly:
    """Float evaluation of sum c_ij x^i y^j."""

    def __init__(self, table: Dict):
        self.terms = [(i, j, float(table[(i, j)])) for (i, j) in MONOMIALS if table[(i, j)]]

    def __call__(self, x, y):
        out = 0.0 * x
        for i, j, c in self.terms:
            out = out + c * x**i * y**j
        return out


def normalize_scale(a: float, coeffs: PerturbationCoefficients, epsilon: float = 0.0) -> SystemInstance:
    """Rescale x = a x1, y = a y1, t = t1 / a^2 to the normalized field.

    A coefficient of x^i y^j picks up a^(i+j-3).  For a < 0 the substitution
    also exchanges the half planes, so the two sides swap.
    """
    if a == 0:
        raise ValueError("a must be nonzero")
    a_frac = Fraction(a) if not isinstance(a, Fraction) else a

    def scaled(table):
        return {(i, j): v * a_frac ** (i + j - 3) for (i, j), v in table.items()}

    a1, b1, a2, b2 = (scaled(t) for t in (coeffs.a1, coeffs.b1, coeffs.a2, coeffs.b2))
    if a < 0:
        a1, b1, a2, b2 = a2, b2, a1, b1
    return SystemInstance(PerturbationCoefficients(a1=a1, b1=b1, a2=a2, b2=b2), epsilon, float(a))


def polar_rhs(instance: SystemInstance, side: int):
    p, q = instance.polynomials(side)
    eps = instance.epsilon

    def rhs(theta, r):
        c, s = math.cos(theta), math.sin(theta)
        rr = r[0]
        x, y = rr * c, rr * s
        pv, qv = p(x, y), q(x, y)
        theta_dot = rr * rr * c * c + 1 + eps * (c * qv - s * pv) / rr
        if theta_dot <= 0:
            raise ThetaSignError(f"theta' = {theta_dot:.3e} <= 0 at r={rr:.6g}, theta={theta:.6g}")
        return [eps * (c * pv + s * qv) / theta_dot]

    return rhs


def half_trajectory(instance: SystemInstance, r0: float, half: str = "upper",
                    rtol: float = RTOL, atol: float = ATOL) -> Tuple[float, int]:
    """Radius after the half revolution, and the number of right-hand-side calls."""
    if not r0 > 0:
        raise ValueError("r0 must be positive")
    side, span = {"upper": (1, (0.0, math.pi)), "lower": (2, (math.pi, 2 * math.pi))}[half]
    sol = solve_ivp(polar_rhs(instance, side), span, [float(r0)], method="DOP853",
                    rtol=rtol, atol=atol)
    if not sol.success:
        raise IntegrationError(sol.message)
    r_end = float(sol.y[0, -1])
    if not r_end > 0:
        raise IntegrationError("trajectory reached the origin")
    return r_end, int(sol.nfev)


def cartesian_half(instance: SystemInstance, r0: float, half: str = "upper",
                   rtol: float = RTOL, atol: float = 1e-13) -> float:
    """Oracle: integrate (x, y) in time until the orbit returns to y = 0."""
    side = 1 if half == "upper" else 2
    p, q = instance.polynomials(side)
    eps = instance.epsilon

    def rhs(t, z):
        x, y = z
        g = x * x + 1
        return [-y * g + eps * p(x, y), x * g + eps * q(x, y)]

    def crossing(t, z):
        return z[1]

    crossing.terminal = True
    crossing.direction = -1 if half == "upper" else 1
    start = [r0, 0.0] if half == "upper" else [-r0, 0.0]
    # theta' >= 1 - O(eps), so half a turn takes at most about pi
    sol = solve_ivp(rhs, (0.0, 4 * math.pi), start, method="DOP853", rtol=rtol, atol=atol,
                    events=crossing, first_step=1e-6)
    if not sol.t_events[0].size:
        raise IntegrationError("no crossing of y = 0 found")
    x_end = sol.y_events[0][0][0]
    return float(abs(x_end))


@dataclass
class ReturnMapSample:
    r0: float
    r_upper: float
    r_return: float
    theta_span: float = 2 * math.pi
    nfev: int = 0

    @property
    def displacement(self) -> float:
        return self.r_return - self.r0


def return_map(instance: SystemInstance, r0: float) -> ReturnMapSample:
    r1, n1 = half_trajectory(instance, r0, "upper")
    r2, n2 = half_trajectory(instance, r1, "lower")
    return ReturnMapSample(float(r0), r1, r2, 2 * math.pi, n1 + n2)


def displacement(instance: SystemInstance, r0: float) -> float:
    return return_map(instance, r0).displacement


@dataclass
class FixedPoint:
    radius: float
    residual: float
    multiplier: float
    predicted: Optional[float] = None
    distance: Optional[float] = None

    def to_dict(self) -> dict:
        return {"radius": self.radius, "residual": self.residual, "multiplier": self.multiplier,
                "stable": self.multiplier < 1, "predicted": self.predicted, "distance": self.distance}


@dataclass
class LimitCycleReport:
    interval: Tuple[float, float]
    epsilon: float
    fixed_points: List[FixedPoint] = field(default_factory=list)
    predicted_zeros: List[float] = field(default_factory=list)
    unmatched_predictions: List[float] = field(default_factory=list)
    status: str = "isolated"
    samples: int = 0

    @property
    def count(self) -> int:
        return len(self.fixed_points)

    @property
    def max_distance(self) -> Optional[float]:
        d = [fp.distance for fp in self.fixed_points if fp.distance is not None]
        return max(d) if d else None

    def to_dict(self) -> dict:
        return {"interval": list(self.interval), "epsilon": self.epsilon, "status": self.status,
                "count": self.count, "fixed_points": [fp.to_dict() for fp in self.fixed_points],
                "predicted_zeros": self.predicted_zeros,
                "unmatched_predictions": self.unmatched_predictions,
                "max_distance": self.max_distance, "samples": self.samples}


def predicted_zeros(coeffs: PerturbationCoefficients, r_interval: Tuple[float, float]) -> List[float]:
    fn = RadialFunction(nu_from_ab(coeffs))
    if fn.is_zero():
        return []
    report = isolate_zeros(fn, (0.0, max(r_interval[1], 1.0)))
    return [z for z in report.roots if r_interval[0] <= z <= r_interval[1]]


def find_limit_cycles(instance: SystemInstance, r_interval: Tuple[float, float],
                      n_grid: int = 48, xtol: float = 1e-13) -> LimitCycleReport:
    """Fixed points of the return map in ``r_interval``, paired with zeros of f.

    The displacement is sampled on a geometric grid augmented with the
    geometric midpoints between consecutive predicted zeros, so each
    predicted zero sits in its own cell.
    """
    lo, hi = map(float, r_interval)
    if not 0 < lo < hi:
        raise ValueError("need 0 < r_min < r_max")
    report = LimitCycleReport((lo, hi), instance.epsilon)
    if instance.epsilon == 0 or instance.coeffs.is_zero():
        report.status = "period-annulus"
        return report
    pred = predicted_zeros(instance.coeffs, (lo, hi))
    report.predicted_zeros = pred
    mids = [math.sqrt(a * b) for a, b in zip(pred[:-1], pred[1:])]
    grid = np.unique(np.concatenate([np.geomspace(lo, hi, n_grid), mids]))
    d = np.array([displacement(instance, r) for r in grid])
    report.samples = len(grid)

    roots = []
    for a, b, da, db in zip(grid[:-1], grid[1:], d[:-1], d[1:]):
        if da == 0:
            roots.append(a)
        elif da * db < 0:
            f = lambda r: displacement(instance, r)
            roots.append(brentq(f, a, b, xtol=xtol, rtol=4 * np.finfo(float).eps))
    if d[-1] == 0:
        roots.append(grid[-1])

    remaining = list(pred)
    for r in roots:
        h = max(1e-6 * r, 1e-8)
        slope = (return_map(instance, r + h).r_return - return_map(instance, r - h).r_return) / (2 * h)
        fp = FixedPoint(float(r), abs(displacement(instance, r)), float(slope))
        if remaining:
            z = min(remaining, key=lambda z: abs(z - r))
            remaining.remove(z)
            fp.predicted, fp.distance = z, abs(z - r)
        report.fixed_points.append(fp)
    report.unmatched_predictions = remaining
    return report


def first_order_defects(instance: SystemInstance, radii: Sequence[float]) -> np.ndarray:
    """(P(r) - r)/eps - f(r) at each radius."""
    fn = RadialFunction(nu_from_ab(instance.coeffs))
    eps = instance.epsilon
    return np.array([displacement(instance, r) / eps - fn.f(r) for r in radii])


def defect_ratio(coeffs: PerturbationCoefficients, eps: float, radii: Sequence[float]) -> dict:
    """max-norm defect at eps and eps/2 and their ratio (2 for an O(eps) defect)."""
    d1 = first_order_defects(SystemInstance(coeffs, eps), radii)
    d2 = first_order_defects(SystemInstance(coeffs, eps / 2), radii)
    m1, m2 = float(np.max(np.abs(d1))), float(np.max(np.abs(d2)))
    ratio = m1 / m2 if m2 else math.inf
    return {"epsilon": eps, "defect": m1, "defect_half": m2, "ratio": ratio,
            "pointwise_ratio": [float(x / y) if y else math.inf for x, y in zip(d1, d2)],
            "ok": DEFECT_RATIO[0] <= ratio <= DEFECT_RATIO[1]}


def validate_first_order(coeffs: PerturbationCoefficients, radii: Sequence[float],
                         ladder: Sequence[float] = EPS_LADDER, max_halvings: int = 3) -> dict:
    """First-order consistency along the eps ladder.

    Each rung is retried at eps/2, eps/4, ... (up to ``max_halvings`` times)
    until the defect ratio falls in DEFECT_RATIO; the rung records the eps
    where that happened, or None.
    """
    rungs = []
    for eps0 in ladder:
        tried, passed = [], None
        eps = eps0
        for _ in range(max_halvings + 1):
            try:
                row = defect_ratio(coeffs, eps, radii)
            except (ThetaSignError, IntegrationError) as exc:
                row = {"epsilon": eps, "error": str(exc), "ok": False}
            tried.append(row)
            if row["ok"]:
                passed = eps
                break
            eps /= 2
        rungs.append({"epsilon": eps0, "passed_at": passed, "tried": tried})
    return {"radii": list(radii), "rungs": rungs,
            "ok": all(r["passed_at"] is not None for r in rungs)}


def identity_defect(radii: Sequence[float] = tuple(np.geomspace(0.1, 20, 12)),
                    coeffs: Optional[PerturbationCoefficients] = None) -> float:
    """max |P(r) - r| at eps = 0."""
    inst = SystemInstance(coeffs or PerturbationCoefficients.zeros(), 0.0)
    return max(abs(return_map(inst, r).r_return - r) for r in radii)


def averaged_cross_check(coeffs: PerturbationCoefficients, r: float) -> float:
    """|f(r) from nu - f(r) by direct quadrature|."""
    fn = RadialFunction(nu_from_ab(coeffs))
    return abs(fn.f(r) - direct_average(coeffs, r))


def orbit_points(instance: SystemInstance, r0: float, n: int = 200) -> Tuple[np.ndarray, np.ndarray]:
    """(x, y) samples of one revolution starting at (r0, 0), for plotting."""
    xs, ys = [], []
    r = float(r0)
    for side, (a, b) in ((1, (0.0, math.pi)), (2, (math.pi, 2 * math.pi))):
        sol = solve_ivp(polar_rhs(instance, side), (a, b), [r], method="DOP853",
                        rtol=1e-10, atol=1e-12, dense_output=True)
        th = np.linspace(a, b, n // 2)
        rr = sol.sol(th)[0]
        xs.append(rr * np.cos(th))
        ys.append(rr * np.sin(th))
        r = float(sol.y[0, -1])
    return np.concatenate(xs), np.concatenate(ys)
