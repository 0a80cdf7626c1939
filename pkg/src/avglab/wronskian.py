"""Wronskians of the generating basis: numeric determinants and closed forms.

The numeric route builds the k x k matrix of derivatives from Taylor jets in
60-digit arithmetic; the basis is nearly dependent both as r -> 0 and as
r -> oo, so a double-precision determinant would lose every digit there.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Dict, Optional, Sequence, Tuple

import mpmath

from . import jets
from .auxiliary import get_aux
from .averaged import basis_derivatives

FULL7: Tuple[int, ...] = (1, 2, 3, 4, 5, 6, 7)
SMOOTH4: Tuple[int, ...] = (2, 3, 4, 7)
BASES = {"full7": FULL7, "smooth4": SMOOTH4}
NUMERIC_DPS = 60


@dataclass(frozen=True)
class WronskianValue:
    k: int
    r: float
    value: float


@dataclass(frozen=True)
class WronskianForm:
    """W_k = prefactor(r) * aux(r); prefactor has constant sign ``sign`` on r > 0."""

    k: int
    text: str
    sign: int
    prefactor: Callable
    aux: Optional[str] = None


def _mp(f):
    return lambda r: f(mpmath.mpf(r))


FULL_FORMS: Dict[int, WronskianForm] = {
    1: WronskianForm(1, "r", 1, _mp(lambda r: r)),
    2: WronskianForm(2, "r^2", 1, _mp(lambda r: r**2)),
    3: WronskianForm(3, "-3 r^4 / (r^2+1)^(5/2)", -1,
                     _mp(lambda r: -3 * r**4 / (r**2 + 1) ** mpmath.mpf(2.5))),
    4: WronskianForm(4, "-6 r^7 (4 r^2 + 5) / (r^2+1)^5", -1,
                     _mp(lambda r: -6 * r**7 * (4 * r**2 + 5) / (r**2 + 1) ** 5)),
    5: WronskianForm(5, "12 r^3 / (r^2+1)^9 * g1(r)", 1,
                     _mp(lambda r: 12 * r**3 / (r**2 + 1) ** 9), "g1"),
    6: WronskianForm(6, "-24 r / (r^2+1)^13 * g2(r)", -1,
                     _mp(lambda r: -24 * r / (r**2 + 1) ** 13), "g2"),
    7: WronskianForm(7, "1728 / (r^2+1)^(35/2) * g3(r)", 1,
                     _mp(lambda r: 1728 / (r**2 + 1) ** mpmath.mpf(17.5)), "g3"),
}

SMOOTH_FORMS: Dict[int, WronskianForm] = {
    1: WronskianForm(1, "r^2", 1, _mp(lambda r: r**2)),
    2: WronskianForm(2, "-r^5 / (r^2+1)^(3/2)", -1,
                     _mp(lambda r: -r**5 / (r**2 + 1) ** mpmath.mpf(1.5))),
    3: WronskianForm(3, "-2 r^9 / (r^2+1)^3", -1,
                     _mp(lambda r: -2 * r**9 / (r**2 + 1) ** 3)),
    4: WronskianForm(4, "12 r^6 / (r^2+1)^(11/2) * h_smooth(r)", 1,
                     _mp(lambda r: 12 * r**6 / (r**2 + 1) ** mpmath.mpf(5.5)), "h_smooth"),
}

FORMS = {"full7": FULL_FORMS, "smooth4": SMOOTH_FORMS}


def _basis(basis) -> Tuple[Sequence[int], str]:
    if isinstance(basis, str):
        return BASES[basis], basis
    basis = tuple(basis)
    name = next((n for n, b in BASES.items() if b == basis), "custom")
    return basis, name


def _check(k: int, r: float, n: int) -> None:
    if not 1 <= k <= n:
        raise ValueError(f"Wronskian order must be 1..{n}")
    if not r > 0:
        raise ValueError("r must be positive")


def wronskian_numeric(k: int, r: float, basis="full7", dps: int = NUMERIC_DPS) -> float:
    """det [f_i^(m)(r)], i over the first k basis functions, m = 0..k-1."""
    funcs, _ = _basis(basis)
    _check(k, r, len(funcs))
    with mpmath.workdps(dps):
        x = mpmath.mpf(r)
        cols = [basis_derivatives(idx, x, k - 1, jets.MP) for idx in funcs[:k]]
        m = mpmath.matrix(k, k)
        for i, col in enumerate(cols):
            for row in range(k):
                m[row, i] = col[row]
        return float(mpmath.det(m))


def wronskian_closed(k: int, r: float, basis="full7", dps: int = 50) -> float:
    """Closed-form Wronskian, through the auxiliary g-functions for k >= 5."""
    _, name = _basis(basis)
    forms = FORMS[name]
    _check(k, r, len(forms))
    form = forms[k]
    with mpmath.workdps(dps):
        value = form.prefactor(r)
        if form.aux is not None:
            value *= get_aux(form.aux).core.evaluate_mp(r, dps)
        return float(value)


def wronskian_table(rs: Sequence[float], basis="full7") -> list:
    funcs, _ = _basis(basis)
    rows = []
    for r in rs:
        for k in range(2 if len(funcs) == 7 else 1, len(funcs) + 1):
            num = wronskian_numeric(k, r, basis)
            closed = wronskian_closed(k, r, basis)
            rows.append({"k": k, "r": float(r), "numeric": num, "closed": closed,
                         "rel_err": abs(num - closed) / max(abs(closed), 1e-300)})
    return rows
