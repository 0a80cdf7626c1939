import numpy as np
import pytest
import sympy as sp

from avglab.wronskian import (BASES, FORMS, wronskian_closed, wronskian_numeric,
                              wronskian_table)

R = sp.symbols("r", positive=True)
S = sp.sqrt(1 + R**2)
SYM = {1: R, 2: R**2, 3: R**2 / S, 4: R**4 / S, 5: sp.atan(R), 6: R**2 * sp.atan(R), 7: 1 - 1 / S}


def _sym_wronskian(ks):
    n = len(ks)
    return sp.Matrix([[sp.diff(SYM[k], R, i) for k in ks] for i in range(n)]).det(method="berkowitz")


@pytest.mark.parametrize("k,expected", [
    (2, R**2),
    (3, -3 * R**4 / (1 + R**2) ** sp.Rational(5, 2)),
    (4, -6 * R**7 * (4 * R**2 + 5) / (1 + R**2) ** 5),
])
def test_low_order_closed_forms_symbolically(k, expected):
    assert sp.simplify(_sym_wronskian(range(1, k + 1)) - expected) == 0


@pytest.mark.parametrize("k,expected", [
    (2, -R**5 / (1 + R**2) ** sp.Rational(3, 2)),
    (3, -2 * R**9 / (1 + R**2) ** 3),
])
def test_smooth_low_order_symbolically(k, expected):
    ks = BASES["smooth4"][:k]
    assert sp.simplify(_sym_wronskian(ks) - expected) == 0


def test_w5_symbolic_spot_values():
    w5 = _sym_wronskian(range(1, 6))
    for r in (sp.Rational(1, 3), 2):
        assert float(w5.subs(R, r).evalf(30)) == pytest.approx(wronskian_closed(5, float(r)), rel=1e-12)


@pytest.mark.parametrize("basis", ["full7", "smooth4"])
def test_numeric_matches_closed(basis):
    n = len(BASES[basis])
    for r in np.geomspace(1e-2, 1e2, 9):
        for k in range(1, n + 1):
            num, closed = wronskian_numeric(k, r, basis), wronskian_closed(k, r, basis)
            assert abs(num - closed) <= 1e-10 * abs(closed)


def test_prefactor_signs():
    for basis, forms in FORMS.items():
        for k, form in forms.items():
            for r in (1e-2, 1.0, 1e2):
                assert np.sign(float(form.prefactor(r))) == form.sign


def test_frozen_values():
    assert wronskian_closed(2, 3.0) == pytest.approx(9.0, rel=1e-15)
    assert wronskian_closed(3, 1.0) == pytest.approx(-3 / 2**2.5, rel=1e-15)
    assert wronskian_closed(4, 1.0) == pytest.approx(-54 / 32, rel=1e-15)


def test_table_and_validation():
    rows = wronskian_table([0.5, 2.0])
    assert len(rows) == 12  # k = 2..7 at two radii
    with pytest.raises(ValueError):
        wronskian_numeric(8, 1.0)
    with pytest.raises(ValueError):
        wronskian_closed(5, 1.0, "smooth4")
    with pytest.raises(ValueError):
        wronskian_numeric(2, 0.0)
