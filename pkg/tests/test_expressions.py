import math
from fractions import Fraction as Fr

import pytest
import sympy as sp

from avglab.exact import PiNumber
from avglab.expressions import (AtanSqrtExpr, head_atan, head_rule, head_sqrt, tail_atan,
                                tail_rule, tail_sqrt)
from avglab.interval import Interval

R = sp.symbols("r", positive=True)


def to_sympy(expr: AtanSqrtExpr):
    out = 0
    for (p, q), poly in expr.terms.items():
        coeffs = [sum(sp.Rational(c.numerator, c.denominator) * sp.pi**n for n, c in enumerate(pc.c))
                  for pc in poly]
        out += sum(c * R**m for m, c in enumerate(coeffs)) * sp.atan(R) ** p * sp.sqrt(1 + R**2) ** q
    return out


SAMPLE = AtanSqrtExpr.from_monomials([(3, 2, 1, 0), (-1, 1, 0, 1), (Fr(1, 2), 0, 2, 0), (5, 3, 0, 0)])


def test_pi_coefficients_evaluate():
    e = AtanSqrtExpr.from_monomials([(PiNumber.pi(), 1, 1, 0)])
    assert e.evaluate(2.0) == pytest.approx(math.pi * 2 * math.atan(2.0), rel=1e-15)


def test_evaluate_matches_sympy():
    e = to_sympy(SAMPLE)
    for r in (0.1, 1.0, 7.5):
        assert SAMPLE.evaluate(r) == pytest.approx(float(e.subs(R, r)), rel=1e-13)
        assert float(SAMPLE.evaluate_mp(r, 40)) == pytest.approx(float(e.subs(R, r).evalf(30)), rel=1e-15)


def test_scaled_derivative_matches_sympy():
    d = SAMPLE.scaled_derivative()
    e = sp.diff(to_sympy(SAMPLE), R) * (1 + R**2)
    for r in (0.2, 1.0, 4.0):
        assert float(d.evaluate_mp(r)) == pytest.approx(float(e.subs(R, r).evalf(30)), rel=1e-14)


def test_algebra():
    a = AtanSqrtExpr.from_monomials([(1, 1, 0, 1)])
    # (r sqrt)^2 = r^2 (1 + r^2)
    assert a * a == AtanSqrtExpr.from_monomials([(1, 2, 0, 0), (1, 4, 0, 0)])
    assert (SAMPLE - SAMPLE).is_zero()
    assert SAMPLE.scale(2) == SAMPLE + SAMPLE
    with pytest.raises(ValueError):
        AtanSqrtExpr({(0, 2): [1]})


@pytest.mark.parametrize("lo,hi", [(0.01, 0.02), (0.5, 0.75), (1.0, 1.5), (10, 20)])
def test_enclosures_contain_samples(lo, hi):
    x = Interval(lo, hi)
    naive, mv = SAMPLE.enclose(x), SAMPLE.enclose_mean_value(x)
    for t in (lo, 0.5 * (lo + hi), hi):
        v = SAMPLE.evaluate(t)
        assert naive.lo - 1e-12 * abs(v) <= v <= naive.hi + 1e-12 * abs(v)
        assert mv.lo - 1e-12 * abs(v) <= v <= mv.hi + 1e-12 * abs(v)
    assert mv.width <= naive.width


def test_series_building_blocks():
    for model, ref, pts in ((head_atan(20), math.atan, (0.0, 0.3, 0.6)),
                            (head_sqrt(20), lambda t: math.sqrt(1 + t * t), (0.0, 0.3, 0.6))):
        for t in pts:
            enc = model.enclose(t, t)
            assert enc.lo - 1e-15 <= ref(t) <= enc.hi + 1e-15
    # atan r = pi/2 - atan u, sqrt(1+r^2) = sqrt(1+u^2)/u with u = 1/r
    for u in (0.05, 0.4):
        enc = tail_atan(20).enclose(u, u)
        assert enc.lo - 1e-15 <= math.pi / 2 - math.atan(u) <= enc.hi + 1e-15
        enc = tail_sqrt(20).enclose(u, u)
        assert enc.lo - 1e-15 <= math.sqrt(1 + u * u) <= enc.hi + 1e-15


def test_head_and_tail_models_reproduce_values():
    head = SAMPLE.head_model()
    degree, tail = SAMPLE.tail_model()
    assert degree == 3
    for r in (0.05, 0.2):
        enc = head.enclose(r, r)
        v = float(SAMPLE.evaluate_mp(r))
        assert enc.lo - 1e-13 <= v <= enc.hi + 1e-13
    for r in (5.0, 40.0):
        u = 1 / r
        enc = tail.enclose(u, u)
        v = float(SAMPLE.evaluate_mp(r)) / r**degree
        assert enc.lo - 1e-13 <= v <= enc.hi + 1e-13


def test_head_rule_leading_term():
    # r - atan r = r^3/3 - ...
    e = AtanSqrtExpr.from_monomials([(1, 1, 0, 0), (-1, 0, 1, 0)])
    rule = head_rule(e.head_model(), 1e-2)
    assert rule["valid"] and rule["sign"] == 1 and rule["leading_order"] == 3
    assert rule["leading_coefficient"] == "1/3"


def test_tail_rule_sign_and_validity():
    e = AtanSqrtExpr.from_monomials([(-2, 3, 0, 0), (1, 0, 1, 0)])
    degree, model = e.tail_model()
    rule = tail_rule(degree, model, 100.0)
    assert rule["valid"] and rule["sign"] == -1
    assert not tail_rule(degree, model, 0.5)["valid"]


def test_zero_expression_rules():
    z = AtanSqrtExpr()
    assert not head_rule(z.head_model(), 0.1)["valid"]
    assert z.tail_model()[0] == 0
