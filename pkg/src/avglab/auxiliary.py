"""The auxiliary functions whose signs decide the Wronskians W5, W6, W7.

Each is stored as exact integer data.  ``g3_prime`` carries the positive
prefactor r/sqrt(1+r^2) separately; its ``core`` is g3' * sqrt(1+r^2) / r.
``h_smooth`` is the sign-carrying factor of the fourth Wronskian of the
smooth-case basis (f2, f3, f4, f7).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Dict, Optional

import mpmath

from .expressions import AtanSqrtExpr

# rows: (coefficient, power of r, power of arctan r, power of sqrt(1+r^2))
G1 = AtanSqrtExpr.from_monomials([
    (12, 10, 1, 0), (-27, 8, 1, 0), (12, 9, 0, 0), (-258, 6, 1, 0), (169, 7, 0, 0),
    (-507, 4, 1, 0), (411, 5, 0, 0), (-408, 2, 1, 0), (373, 3, 0, 0), (-120, 0, 1, 0),
    (120, 1, 0, 0),
])

G1_PRIME = AtanSqrtExpr.from_monomials([
    (120, 9, 1, 0), (-216, 7, 1, 0), (120, 8, 0, 0), (-1548, 5, 1, 0), (1144, 6, 0, 0),
    (-2028, 3, 1, 0), (1836, 4, 0, 0), (-816, 1, 1, 0), (831, 2, 0, 0),
])

G2 = AtanSqrtExpr.from_monomials([
    (216, 12, 1, 0), (168, 10, 1, 0), (216, 11, 0, 0), (843, 8, 1, 0), (96, 9, 0, 0),
    (4986, 6, 1, 0), (-3061, 7, 0, 0), (8175, 4, 1, 0), (-6655, 5, 0, 0),
    (5160, 2, 1, 0), (-4800, 3, 0, 0), (1080, 0, 1, 0), (-1080, 1, 0, 0),
])

G3 = AtanSqrtExpr.from_monomials([
    (3120, 11, 1, 0), (-4864, 10, 0, 1), (10500, 9, 1, 0), (3120, 10, 0, 0),
    (-14048, 8, 0, 1), (13155, 7, 1, 0), (9460, 8, 0, 0), (-14224, 6, 0, 1),
    (7350, 5, 1, 0), (10279, 6, 0, 0), (-6020, 4, 0, 1), (1575, 3, 1, 0),
    (4985, 4, 0, 0), (-1120, 2, 0, 1), (1200, 2, 0, 0), (-160, 0, 0, 1), (160, 0, 0, 0),
])

# g3'(r) = r / sqrt(1+r^2) * G3_PRIME_CORE(r)
G3_PRIME_CORE = AtanSqrtExpr.from_monomials([
    (34320, 9, 1, 1), (-53504, 10, 0, 0), (94500, 7, 1, 1), (34320, 8, 0, 1),
    (-175072, 8, 0, 0), (92085, 5, 1, 1), (83060, 6, 0, 1), (-211952, 6, 0, 0),
    (36750, 3, 1, 1), (67449, 4, 0, 1), (-115444, 4, 0, 0), (4725, 1, 1, 1),
    (21515, 2, 0, 1), (-27440, 2, 0, 0), (2400, 0, 0, 1), (-2400, 0, 0, 0),
])

G31 = AtanSqrtExpr.from_monomials([
    (-343200, 10, 1, 0), (535040, 9, 0, 1), (-1064880, 8, 1, 0), (-343200, 9, 0, 0),
    (1400576, 7, 0, 1), (-1214010, 6, 1, 0), (-950480, 7, 0, 0), (1271712, 5, 0, 1),
    (-607425, 4, 1, 0), (-927690, 5, 0, 0), (461776, 3, 0, 1), (-119700, 2, 1, 0),
    (-371091, 3, 0, 0), (54880, 1, 0, 1), (-4725, 0, 1, 0), (-50155, 1, 0, 0),
])

# 4th Wronskian of (f2, f3, f4, f7) = 12 r^6 / (1+r^2)^(11/2) * H_SMOOTH
H_SMOOTH = AtanSqrtExpr.from_monomials([
    (1, 4, 0, 1), (-4, 4, 0, 0), (8, 2, 0, 1), (-12, 2, 0, 0), (8, 0, 0, 1), (-8, 0, 0, 0),
])


@dataclass(frozen=True)
class AuxiliaryExpression:
    """``value(r) = prefactor(r) * core(r)`` with ``prefactor > 0`` on r > 0."""

    name: str
    core: AtanSqrtExpr
    prefactor_text: str = "1"
    prefactor: Optional[Callable] = None
    description: str = ""

    def value(self, r, dps: int = 50) -> float:
        with mpmath.workdps(dps):
            core = self.core.evaluate_mp(r, dps)
            if self.prefactor is not None:
                core *= self.prefactor(mpmath.mpf(r))
            return float(core)


AUXILIARY: Dict[str, AuxiliaryExpression] = {
    "g1": AuxiliaryExpression("g1", G1, description="W5 = 12 r^3/(r^2+1)^9 * g1"),
    "g1_prime": AuxiliaryExpression("g1_prime", G1_PRIME, description="derivative of g1"),
    "g2": AuxiliaryExpression("g2", G2, description="W6 = -24 r/(r^2+1)^13 * g2"),
    "g3": AuxiliaryExpression("g3", G3, description="W7 = 1728/(r^2+1)^(35/2) * g3"),
    "g3_prime": AuxiliaryExpression(
        "g3_prime", G3_PRIME_CORE, "r/sqrt(1+r^2)", lambda r: r / mpmath.sqrt(1 + r * r),
        "derivative of g3; core = g3' sqrt(1+r^2)/r"),
    "g31": AuxiliaryExpression("g31", G31, description="d/dr(core of g3') = -g31/sqrt(1+r^2)"),
    "h_smooth": AuxiliaryExpression(
        "h_smooth", H_SMOOTH,
        description="W[f2,f3,f4,f7] = 12 r^6/(r^2+1)^(11/2) * h_smooth"),
}

ALIASES = {"g1p": "g1_prime", "g3p": "g3_prime", "g1'": "g1_prime", "g3'": "g3_prime"}


def get_aux(name: str) -> AuxiliaryExpression:
    key = ALIASES.get(name, name)
    try:
        return AUXILIARY[key]
    except KeyError:
        raise KeyError(f"unknown auxiliary expression {name!r}; known: {sorted(AUXILIARY)}") from None


def eval_aux(name: str, r: float) -> float:
    """Value of the named auxiliary expression (50-digit evaluation)."""
    if not r > 0 or not math.isfinite(r):
        raise ValueError("r must be positive")
    return get_aux(name).value(r)
