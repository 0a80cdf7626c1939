"""Exact coefficient algebra: a/b -> omega -> mu -> nu and back.

All quantities are ``fractions.Fraction``.  Side ``k=1`` is the upper half
plane (y > 0), ``k=2`` the lower half plane.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple

from .exact import as_fraction, format_fraction

Index = Tuple[int, int]

# monomials x^i y^j of the cubic perturbation, 0 <= i+j <= 3
MONOMIALS: Tuple[Index, ...] = tuple((i, d - i) for d in range(4) for i in range(d, -1, -1))
# omega / mu index set, 1 <= i+j <= 4
OMEGA_INDICES: Tuple[Index, ...] = tuple((i, d - i) for d in range(1, 5) for i in range(d, -1, -1))
# mu entries multiplying integrals that vanish identically (odd power of cos)
INERT_MU: frozenset = frozenset(ix for ix in OMEGA_INDICES if ix[0] % 2 == 1)

# nu_k = sum_c coefficient * mu_c
NU_ROWS: Tuple[Dict[Index, Fraction], ...] = (
    {(2, 1): Fraction(1), (0, 3): Fraction(-1)},
    {(4, 0): Fraction(1, 2), (2, 2): Fraction(1, 2), (0, 4): Fraction(-3, 2)},
    {(0, 2): Fraction(1), (2, 2): Fraction(-1), (0, 4): Fraction(2)},
    {(0, 4): Fraction(1)},
    {(0, 1): Fraction(1), (2, 1): Fraction(-1), (0, 3): Fraction(1)},
    {(0, 3): Fraction(1)},
    {(2, 0): Fraction(1), (0, 2): Fraction(-1), (4, 0): Fraction(-1), (2, 2): Fraction(1),
     (0, 4): Fraction(-1)},
)
# column order of the Jacobian whose determinant is 1/2
PIVOTS: Tuple[Index, ...] = ((2, 1), (4, 0), (0, 2), (0, 4), (0, 1), (0, 3), (2, 0))


def _key(s: str) -> Index:
    i, j = s.split(",")
    return int(i), int(j)


def _full_table(entries: Optional[Mapping[Index, object]], keys: Sequence[Index], what: str
                ) -> Dict[Index, Fraction]:
    table = {k: Fraction(0) for k in keys}
    for k, v in (entries or {}).items():
        k = tuple(k)
        if k not in table:
            raise KeyError(f"{what}: index {k} outside the allowed range")
        table[k] = as_fraction(v)
    return table


@dataclass(frozen=True)
class PerturbationCoefficients:
    """The 40 constants a^k_ij, b^k_ij of the cubic piecewise perturbation.

    ``P_k(x, y) = sum a^k_ij x^i y^j`` and ``Q_k`` likewise with ``b``.
    """

    a1: Dict[Index, Fraction] = field(default_factory=dict)
    b1: Dict[Index, Fraction] = field(default_factory=dict)
    a2: Dict[Index, Fraction] = field(default_factory=dict)
    b2: Dict[Index, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        for name in ("a1", "b1", "a2", "b2"):
            object.__setattr__(self, name, _full_table(getattr(self, name), MONOMIALS, name))

    @classmethod
    def zeros(cls) -> "PerturbationCoefficients":
        return cls()

    def a(self, k: int) -> Dict[Index, Fraction]:
        return self.a1 if k == 1 else self.a2

    def b(self, k: int) -> Dict[Index, Fraction]:
        return self.b1 if k == 1 else self.b2

    def is_zero(self) -> bool:
        return not any(v for t in (self.a1, self.b1, self.a2, self.b2) for v in t.values())

    def entries(self) -> Iterator[Tuple[str, Index, Fraction]]:
        for name in ("a1", "b1", "a2", "b2"):
            for ix in MONOMIALS:
                yield name, ix, getattr(self, name)[ix]

    def to_dict(self) -> dict:
        return {name: {f"{i},{j}": format_fraction(getattr(self, name)[(i, j)]) for i, j in MONOMIALS}
                for name in ("a1", "b1", "a2", "b2")}

    @classmethod
    def from_dict(cls, data: Mapping) -> "PerturbationCoefficients":
        extra = set(data) - {"a1", "b1", "a2", "b2"}
        if extra:
            raise KeyError(f"unexpected coefficient tables {sorted(extra)}")
        return cls(**{name: {_key(k): Fraction(v) for k, v in data.get(name, {}).items()}
                      for name in ("a1", "b1", "a2", "b2")})

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "PerturbationCoefficients":
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class OmegaTable:
    omega1: Dict[Index, Fraction]
    omega2: Dict[Index, Fraction]

    def __post_init__(self):
        object.__setattr__(self, "omega1", _full_table(self.omega1, OMEGA_INDICES, "omega1"))
        object.__setattr__(self, "omega2", _full_table(self.omega2, OMEGA_INDICES, "omega2"))

    def omega(self, k: int) -> Dict[Index, Fraction]:
        return self.omega1 if k == 1 else self.omega2


@dataclass(frozen=True)
class MuTable:
    """mu_ij for 1 <= i+j <= 4.  Entries in ``INERT_MU`` are kept but do not
    reach the averaged function (their integrals vanish)."""

    mu: Dict[Index, Fraction]

    def __post_init__(self):
        object.__setattr__(self, "mu", _full_table(self.mu, OMEGA_INDICES, "mu"))

    def __getitem__(self, ix: Index) -> Fraction:
        return self.mu[ix]

    @property
    def inert(self) -> Dict[Index, Fraction]:
        return {k: v for k, v in self.mu.items() if k in INERT_MU}


@dataclass(frozen=True)
class NuVector:
    """The seven free parameters of the averaged function (0-based storage)."""

    values: Tuple[Fraction, ...]

    def __post_init__(self):
        vals = tuple(as_fraction(v) for v in self.values)
        if len(vals) != 7:
            raise ValueError(f"NuVector needs 7 entries, got {len(vals)}")
        object.__setattr__(self, "values", vals)

    @classmethod
    def of(cls, *values) -> "NuVector":
        return cls(tuple(values))

    @classmethod
    def zeros(cls) -> "NuVector":
        return cls((0,) * 7)

    def __iter__(self) -> Iterator[Fraction]:
        return iter(self.values)

    def __getitem__(self, i: int) -> Fraction:
        return self.values[i]

    def __len__(self) -> int:
        return 7

    def __add__(self, other: "NuVector") -> "NuVector":
        return NuVector(tuple(x + y for x, y in zip(self, other)))

    def scale(self, c) -> "NuVector":
        c = as_fraction(c)
        return NuVector(tuple(c * x for x in self))

    def is_zero(self) -> bool:
        return not any(self.values)

    def as_floats(self) -> List[float]:
        return [float(v) for v in self.values]

    def to_list(self) -> List[str]:
        return [format_fraction(v) for v in self.values]

    @classmethod
    def from_list(cls, items: Iterable) -> "NuVector":
        return cls(tuple(as_fraction(v) for v in items))


def omega_from_ab(coeffs: PerturbationCoefficients) -> OmegaTable:
    """omega^k_ij = a^k_{i-1,j} + b^k_{i,j-1}; out-of-range indices read as 0."""
    sides = []
    for k in (1, 2):
        a, b = coeffs.a(k), coeffs.b(k)
        sides.append({(i, j): a.get((i - 1, j), Fraction(0)) + b.get((i, j - 1), Fraction(0))
                      for i, j in OMEGA_INDICES})
    return OmegaTable(*sides)


def mu_from_omega(omega: OmegaTable) -> MuTable:
    """mu = omega^1 + (-1)^(i+j) omega^2."""
    return MuTable({ix: omega.omega1[ix] + (-1) ** (ix[0] + ix[1]) * omega.omega2[ix]
                    for ix in OMEGA_INDICES})


def nu_from_mu(mu: MuTable) -> NuVector:
    return NuVector(tuple(sum((c * mu[ix] for ix, c in row.items()), Fraction(0)) for row in NU_ROWS))


def nu_from_ab(coeffs: PerturbationCoefficients) -> NuVector:
    return nu_from_mu(mu_from_omega(omega_from_ab(coeffs)))


# -- exact linear algebra -----------------------------------------------------

def det_exact(matrix: Sequence[Sequence]) -> Fraction:
    """Determinant by fraction-exact Gaussian elimination."""
    m = [[as_fraction(x) for x in row] for row in matrix]
    n = len(m)
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            det = -det
        det *= m[col][col]
        for r in range(col + 1, n):
            f = m[r][col] / m[col][col]
            if f:
                for c in range(col, n):
                    m[r][c] -= f * m[col][c]
    return det


def solve_exact(matrix: Sequence[Sequence], rhs: Sequence) -> List[Fraction]:
    n = len(matrix)
    m = [[as_fraction(x) for x in row] + [as_fraction(rhs[i])] for i, row in enumerate(matrix)]
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular system")
        m[col], m[piv] = m[piv], m[col]
        for r in range(n):
            if r != col and m[r][col] != 0:
                f = m[r][col] / m[col][col]
                for c in range(col, n + 1):
                    m[r][c] -= f * m[col][c]
    return [m[i][n] / m[i][i] for i in range(n)]


def jacobian_matrix(pivots: Sequence[Index] = PIVOTS) -> List[List[Fraction]]:
    return [[row.get(ix, Fraction(0)) for ix in pivots] for row in NU_ROWS]


def jacobian_determinant(pivots: Sequence[Index] = PIVOTS) -> Fraction:
    """det d(nu_1..nu_7)/d(mu over ``pivots``); 1/2 for the default order."""
    return det_exact(jacobian_matrix(pivots))


def ab_from_nu(nu: NuVector) -> PerturbationCoefficients:
    """Canonical coefficients reproducing ``nu`` through the forward chain.

    Side 2 and every non-pivot mu are zero, so omega^1 = mu; each omega^1_ij
    is carried by a^1_{i-1,j} (i >= 1) or by b^1_{0,j-1} (i = 0).
    """
    mu_vals = solve_exact(jacobian_matrix(), list(nu))
    a1: Dict[Index, Fraction] = {}
    b1: Dict[Index, Fraction] = {}
    for (i, j), v in zip(PIVOTS, mu_vals):
        if v == 0:
            continue
        if i >= 1:
            a1[(i - 1, j)] = v
        else:
            b1[(0, j - 1)] = v
    return PerturbationCoefficients(a1=a1, b1=b1)


def smooth_restriction(coeffs: PerturbationCoefficients) -> PerturbationCoefficients:
    """Copy side 1 onto side 2 (the smooth, non-switching perturbation)."""
    return PerturbationCoefficients(a1=dict(coeffs.a1), b1=dict(coeffs.b1),
                                    a2=dict(coeffs.a1), b2=dict(coeffs.b1))
