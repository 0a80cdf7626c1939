import math
from fractions import Fraction as Fr

import mpmath
import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from avglab import jets
from avglab.averaged import (RadialFunction, basis_derivatives, basis_values, direct_average,
                             eval_basis, eval_dF, eval_f, eval_F)
from avglab.coefficients import NuVector, PerturbationCoefficients, ab_from_nu, nu_from_ab

NU = NuVector.of(1, -2, Fr(1, 3), 0, -1, Fr(1, 2), 3)
# 40-digit mpmath evaluation of sum w_k nu_k f_k and its derivative, frozen
FROZEN = {
    0.01: (-0.00005073385978909685961104, -0.009988241734743524369494),
    1.5: (-5.387635187736349868882, -10.27194285739224076111),
    40.0: (-7451.841591152593560589, -374.9391664403036651272),
}

R = sp.symbols("r", positive=True)
S = sp.sqrt(1 + R**2)
SYM_BASIS = (R, R**2, R**2 / S, R**4 / S, sp.atan(R), R**2 * sp.atan(R), 1 - 1 / S)


@pytest.mark.parametrize("r", sorted(FROZEN))
def test_F_frozen(r):
    fn = RadialFunction(NU)
    val, der = FROZEN[r]
    assert fn.F(r) == pytest.approx(val, rel=1e-13)
    assert fn.dF(r) == pytest.approx(der, rel=1e-12)
    mv, md = fn.F_mp(r)
    assert float(mv) == pytest.approx(val, rel=1e-15)
    assert float(md) == pytest.approx(der, rel=1e-15)


@pytest.mark.parametrize("k", range(1, 8))
def test_basis_derivatives_against_sympy(k):
    r0 = sp.Rational(7, 5)
    for order in range(0, 7):
        exact = float(sp.diff(SYM_BASIS[k - 1], R, order).subs(R, r0).evalf(30))
        assert eval_basis(k, 1.4, order) == pytest.approx(exact, rel=1e-11, abs=1e-14)


def test_mp_jets_match_float_jets():
    for k in range(1, 8):
        fl = basis_derivatives(k, 0.8, 4)
        with mpmath.workdps(40):
            mp = basis_derivatives(k, mpmath.mpf(0.8), 4, jets.MP)
        for a, b in zip(fl, mp):
            assert a == pytest.approx(float(b), rel=1e-13, abs=1e-15)


def test_vectorized_matches_scalar():
    rs = np.array([0.0, 1e-3, 0.5, 2.0, 300.0])
    for order in (0, 1):
        vals = basis_values(rs, order)
        for k in range(1, 8):
            for j, r in enumerate(rs):
                assert vals[k - 1, j] == pytest.approx(eval_basis(k, r, order), rel=1e-14, abs=1e-300)
    with pytest.raises(ValueError):
        basis_values(rs, 2)


def test_f_limit_at_origin():
    fn = RadialFunction(NU)
    assert fn.f0() == 2 * 1 + 2 * (-1)
    assert fn.f(0.0) == fn.f0()
    assert fn.f(1e-6) == pytest.approx(fn.f0(), abs=1e-5)


def test_f7_small_r_no_cancellation():
    assert eval_basis(7, 1e-9) == pytest.approx(0.5e-18, rel=1e-12)


def test_module_level_helpers():
    fn = RadialFunction(NU)
    assert eval_F(fn, 2.0) == fn.F(2.0)
    assert eval_f(fn, 2.0) == pytest.approx(fn.F(2.0) / 2.0)
    assert eval_dF(fn, 2.0) == pytest.approx(fn.dF(2.0), rel=1e-13)
    assert eval_dF(fn, 2.0, 3) == pytest.approx(fn.derivative(2.0, 3))


def test_direct_average_hand_case():
    # P1 = x, Q1 = y/2: f(r) = pi/2 (nu3 f3 + nu7 f7)/r with nu3 = nu7 = 1/2
    c = PerturbationCoefficients(a1={(1, 0): 1}, b1={(0, 1): Fr(1, 2)})
    r = 1.0
    s = math.sqrt(2)
    expected = math.pi / 2 * (1 / s + 1 - 1 / s)
    assert direct_average(c, r) == pytest.approx(expected, rel=1e-12)


@settings(max_examples=25, deadline=None)
@given(st.lists(st.integers(-9, 9), min_size=7, max_size=7),
       st.sampled_from([0.1, 0.5, 1.0, 2.0, 5.0, 10.0]))
def test_nu_path_matches_direct_quadrature(vals, r):
    nu = NuVector(tuple(Fr(v) for v in vals))
    c = ab_from_nu(nu)
    fn = RadialFunction(nu_from_ab(c))
    d = r * direct_average(c, r)
    assert abs(fn.F(r) - d) <= 1e-9 * max(1.0, abs(d))


def test_sqrt_times_F_is_exact():
    fn = RadialFunction(NU)
    e = fn.sqrt_times_F()
    for r in (0.3, 3.0):
        assert float(e.evaluate_mp(r)) == pytest.approx(fn.F(r) * math.sqrt(1 + r * r), rel=1e-13)


def test_bad_arguments():
    with pytest.raises(ValueError):
        eval_basis(8, 1.0)
    with pytest.raises(ValueError):
        eval_basis(1, 1.0, 7)
    with pytest.raises(ValueError):
        eval_basis(1, -1.0)
