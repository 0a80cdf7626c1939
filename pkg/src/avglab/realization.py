"""Averaged functions with prescribed simple zeros (sharpness of the bounds).

For m requested radii the coefficient vector is taken from the kernel of the
m x (m+1) collocation matrix of the first m+1 basis functions of the ECT
ordering.  Every prefix of that ordering is a Chebyshev system, so the
kernel is one-dimensional and the resulting F has exactly the m requested
zeros, all simple.  With 6 (full) or 3 (smooth) radii this uses the whole
basis.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import mpmath
import numpy as np

from . import jets
from .averaged import WEIGHTS, WEIGHTS_EXACT, RadialFunction, _pi_mp, basis_derivatives, basis_values
from .coefficients import NuVector, PerturbationCoefficients, ab_from_nu, nu_from_ab, smooth_restriction
from .zeros import DEFAULT_R_MAX, ZeroIsolationError, isolate_zeros

MODES = {"full": (1, 2, 3, 4, 5, 6, 7), "smooth": (2, 3, 4, 7)}
MAX_RADII = {"full": 6, "smooth": 3}
CANONICAL_RADII = {
    "full": tuple(0.5 * 16 ** (i / 5) for i in range(6)),
    "smooth": (0.5, 2.0, 8.0),
}
RATIONAL_DENOMINATOR = 10**12
MAX_DENOMINATOR = 10**40
ROOT_SHIFT_TOL = 1e-11
MP_DPS = 50
ROOT_MATCH_TOL = 1e-9
RESIDUAL_TOL = 1e-9
SLOPE_TOL = 1e-6
DEGENERACY_TOL = 1e-13
PERTURBATION = 1e-6


class RealizationError(ValueError):
    pass


@dataclass(frozen=True)
class RealizationRequest:
    radii: Tuple[float, ...]
    mode: str = "full"

    def __post_init__(self):
        radii = tuple(float(r) for r in self.radii)
        object.__setattr__(self, "radii", radii)
        if self.mode not in MODES:
            raise RealizationError(f"mode must be one of {sorted(MODES)}")
        if not radii:
            raise RealizationError("at least one radius is required")
        if len(radii) > MAX_RADII[self.mode]:
            raise RealizationError(f"{self.mode} mode admits at most {MAX_RADII[self.mode]} radii")
        if any(not (r > 0 and math.isfinite(r)) for r in radii):
            raise RealizationError("radii must be positive and finite")
        if any(b <= a for a, b in zip(radii[:-1], radii[1:])):
            raise RealizationError("radii must be strictly increasing")


@dataclass
class RealizationResult:
    request: RealizationRequest
    nu: Optional[NuVector] = None
    coeffs: Optional[PerturbationCoefficients] = None
    verified_roots: List[dict] = field(default_factory=list)
    extraneous_roots: List[float] = field(default_factory=list)
    kernel_dim: int = 0
    denominator_bound: int = 0
    perturbed: bool = False
    radii_used: Tuple[float, ...] = ()
    diagnostics: List[str] = field(default_factory=list)
    zero_report: Optional[dict] = None

    @property
    def success(self) -> bool:
        return self.nu is not None and not self.diagnostics

    def to_dict(self) -> dict:
        return {
            "radii": list(self.request.radii), "mode": self.request.mode,
            "success": self.success, "nu": self.nu.to_list() if self.nu else None,
            "nu_float": self.nu.as_floats() if self.nu else None,
            "coefficients": self.coeffs.to_dict() if self.coeffs else None,
            "verified_roots": self.verified_roots, "extraneous_roots": self.extraneous_roots,
            "kernel_dim": self.kernel_dim, "denominator_bound": str(self.denominator_bound), "perturbed": self.perturbed,
            "radii_used": list(self.radii_used), "diagnostics": self.diagnostics,
            "zero_report": self.zero_report,
        }


def collocation_matrix(radii: Sequence[float], basis: Sequence[int]) -> np.ndarray:
    """Rows r_i, columns w_k f_k(r_i) for k in ``basis``."""
    vals = basis_values(np.asarray(radii, dtype=float), 0)
    idx = [k - 1 for k in basis]
    return (WEIGHTS[idx, None] * vals[idx]).T


def kernel(matrix: np.ndarray) -> Tuple[np.ndarray, int, float]:
    """Unit-max kernel vector via SVD of the column-equilibrated matrix.

    Returns the vector, the numerical kernel dimension and the smallest
    relative singular value among the constraint directions.
    """
    m, n = matrix.shape
    scale = np.linalg.norm(matrix, axis=0)
    scale[scale == 0] = 1.0
    _, s, vt = np.linalg.svd(matrix / scale, full_matrices=True)
    rank_gap = s[-1] / s[0] if len(s) else 1.0
    rank = int(np.sum(s > DEGENERACY_TOL * s[0])) if len(s) else 0
    v = vt[-1] / scale
    return v / np.max(np.abs(v)), n - rank, rank_gap


def rationalize(v: Sequence, max_den: int = RATIONAL_DENOMINATOR) -> List[Fraction]:
    """Continued-fraction rounding; accepts floats or mpf values."""
    out = []
    for x in v:
        if isinstance(x, mpmath.mpf):
            sign, man, exp, _ = x._mpf_
            x = (-1) ** sign * Fraction(int(man)) * Fraction(2) ** int(exp)
        out.append(Fraction(x).limit_denominator(max_den))
    return out


def refine_kernel(radii: Sequence[float], basis: Sequence[int], v: np.ndarray,
                  dps: int = MP_DPS) -> List:
    """Kernel vector recomputed in mpmath, pinned to 1 at the largest float entry."""
    j = int(np.argmax(np.abs(v)))
    sign = 1 if v[j] > 0 else -1
    with mpmath.workdps(dps):
        cols = []
        for k in basis:
            w = _pi_mp(WEIGHTS_EXACT[k - 1])
            cols.append([w * basis_derivatives(k, mpmath.mpf(r), 0, jets.MP)[0] for r in radii])
        others = [i for i in range(len(basis)) if i != j]
        a = mpmath.matrix([[cols[i][row] for i in others] for row in range(len(radii))])
        rhs = mpmath.matrix([-sign * cols[j][row] for row in range(len(radii))])
        x = mpmath.lu_solve(a, rhs) if others else []
        out = [mpmath.mpf(0)] * len(basis)
        out[j] = mpmath.mpf(sign)
        for i, val in zip(others, x):
            out[i] = val
        return out


def _nu_from_prefix(prefix: Sequence[int], values: Sequence[Fraction]) -> NuVector:
    full = [Fraction(0)] * 7
    for k, x in zip(prefix, values):
        full[k - 1] = x
    return NuVector(tuple(full))


def rational_kernel(radii: Sequence[float], prefix: Sequence[int], v_mp: Sequence) -> Tuple[NuVector, int]:
    """Smallest denominator bound (from 1e12 upward) keeping every root shift tiny.

    The shift of the zero at r_i caused by rounding is about F(r_i) / F'(r_i);
    it has to stay below ROOT_SHIFT_TOL * max(1, r_i).
    """
    den = RATIONAL_DENOMINATOR
    while True:
        nu = _nu_from_prefix(prefix, rationalize(v_mp, den))
        fn = RadialFunction(nu)
        ok = True
        for r in radii:
            val, der = fn.F_mp(r)
            if der == 0 or abs(val / der) > ROOT_SHIFT_TOL * max(1.0, r):
                ok = False
                break
        if ok or den >= MAX_DENOMINATOR:
            return nu, den
        den *= 10**4


def refine_root(fn: RadialFunction, x0: float, lo: float, hi: float, dps: int = MP_DPS) -> float:
    """Newton in mpmath from the float root, kept inside its bracket."""
    with mpmath.workdps(dps):
        x = mpmath.mpf(x0)
        for _ in range(20):
            val, der = fn.F_mp(x, dps)
            if der == 0:
                break
            step = val / der
            x_new = x - step
            if not lo <= x_new <= hi:
                break
            x = x_new
            if abs(step) <= mpmath.mpf(10) ** (-30) * max(1, abs(x)):
                break
        return float(x)


def _coefficients(nu: NuVector, mode: str) -> PerturbationCoefficients:
    base = ab_from_nu(nu)
    if mode == "full":
        return base
    half = PerturbationCoefficients(a1={k: v / 2 for k, v in base.a1.items()},
                                    b1={k: v / 2 for k, v in base.b1.items()})
    return smooth_restriction(half)


def place_zeros(req: RealizationRequest, r_max: float = DEFAULT_R_MAX) -> RealizationResult:
    """nu with F vanishing exactly at the requested radii, verified by root isolation."""
    res = RealizationResult(req)
    basis = MODES[req.mode]
    prefix = basis[: len(req.radii) + 1]
    radii = np.array(req.radii)
    mat = collocation_matrix(radii, prefix)
    v, dim, _ = kernel(mat)
    res.kernel_dim = dim
    if dim != 1:
        res.perturbed = True
        rng = np.random.default_rng(0)
        radii = radii * (1 + PERTURBATION * rng.standard_normal(len(radii)))
        v, dim, _ = kernel(collocation_matrix(radii, prefix))
        if dim != 1:
            res.diagnostics.append(f"kernel dimension {dim} after perturbing the radii")
            return res
    res.radii_used = tuple(float(r) for r in radii)

    nu, den = rational_kernel(res.radii_used, prefix, refine_kernel(res.radii_used, prefix, v))
    res.nu = nu
    res.denominator_bound = den
    res.coeffs = _coefficients(nu, req.mode)
    if nu_from_ab(res.coeffs) != nu:
        res.diagnostics.append("coefficient round trip does not reproduce nu")

    fn = RadialFunction(nu)
    norm = float(np.linalg.norm(nu.as_floats()))
    try:
        report = isolate_zeros(fn, (0.0, r_max))
    except ZeroIsolationError as exc:
        res.diagnostics.append(str(exc))
        return res
    res.zero_report = report.to_dict()
    if not report.complete:
        res.diagnostics.append("head or tail rule failed; zeros outside the grid not excluded")

    unmatched = list(report.zeros)
    for r in res.radii_used:
        z = min(unmatched, key=lambda z: abs(z.root - r), default=None)
        val, der = fn.F_mp(r)
        residual, slope = abs(float(val)), abs(float(der))
        row = {"radius": r, "root": None, "residual": residual, "derivative": slope,
               "simple": False}
        root = None if z is None else refine_root(fn, z.root, *z.bracket)
        if root is not None and abs(root - r) <= ROOT_MATCH_TOL * max(1.0, r):
            unmatched.remove(z)
            row.update(root=root, simple=z.simple)
        else:
            res.diagnostics.append(f"no isolated zero found at r={r:.12g}")
        if residual > RESIDUAL_TOL * norm:
            res.diagnostics.append(f"residual {residual:.3e} at r={r:.12g} exceeds tolerance")
        if row["root"] is not None and not row["simple"]:
            res.diagnostics.append(f"zero at r={r:.12g} fails the relative simplicity test")
        if slope <= SLOPE_TOL * norm:
            res.diagnostics.append(f"|F'| = {slope:.3e} at r={r:.12g} is below {SLOPE_TOL:g}*||nu||")
        res.verified_roots.append(row)
    res.extraneous_roots = [z.root for z in unmatched]
    if unmatched:
        res.diagnostics.append(f"{len(unmatched)} extraneous zero(s)")
    return res


def realize(radii: Sequence[float], mode: str = "full", r_max: float = DEFAULT_R_MAX) -> RealizationResult:
    return place_zeros(RealizationRequest(tuple(radii), mode), r_max)


def random_radii(rng: np.random.Generator, n: int, lo: float = 0.2, hi: float = 20.0,
                 min_ratio: float = 1.05) -> Tuple[float, ...]:
    """Log-uniform sorted radii with neighbouring ratios at least ``min_ratio``."""
    while True:
        r = np.sort(np.exp(rng.uniform(math.log(lo), math.log(hi), n)))
        if n == 1 or np.min(r[1:] / r[:-1]) >= min_ratio:
            return tuple(float(x) for x in r)


def sharpness_suite(seed: int = 0, n_random: int = 100) -> dict:
    """Canonical realizations in both modes plus ``n_random`` random radius sets."""
    rng = np.random.default_rng(seed)
    canonical = {mode: place_zeros(RealizationRequest(CANONICAL_RADII[mode], mode))
                 for mode in MODES}
    failures, degeneracies, ok = [], [], 0
    for i in range(n_random):
        mode = "full" if i % 2 == 0 else "smooth"
        radii = random_radii(rng, MAX_RADII[mode])
        res = place_zeros(RealizationRequest(radii, mode))
        if res.perturbed:
            degeneracies.append({"radii": list(radii), "mode": mode})
        if res.success:
            ok += 1
        else:
            failures.append({"radii": list(radii), "mode": mode, "diagnostics": res.diagnostics})
    return {
        "seed": seed,
        "canonical": {m: r.to_dict() for m, r in canonical.items()},
        "canonical_ok": all(r.success for r in canonical.values()),
        "random_total": n_random, "random_ok": ok,
        "success_rate": ok / n_random if n_random else 1.0,
        "degeneracies": degeneracies, "failures": failures,
    }
