import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from avglab.integrals import (TABLE_IDS, MonomialIntegralId, adaptive_quad, eval_I, eval_J,
                              integral_table, quadrature_oracle)

# 30-digit mpmath quadrature, frozen
ORACLE = {
    ((0, 0), 1e-3): 3.1415910827946445398,
    ((0, 0), 0.5): 2.8099258924162905573,
    ((0, 0), 3.0): 0.99345882657961012344,
    ((0, 1), 1e-3): 1.999999333333733333,
    ((0, 1), 0.5): 1.8545904360032244649,
    ((0, 1), 1e3): 0.0031395926542564595051,
    ((2, 1), 1e-3): 0.66666626666695238073,
    ((2, 1), 0.5): 0.58163825598710214057,
    ((2, 1), 1e3): 1.9968604073457435405e-6,
    ((4, 0), 1e-3): 1.1780962633493272461,
    ((4, 0), 3.0): 0.14801275449560353652,
    ((4, 0), 1e3): 1.5707931883438341122e-6,
    ((0, 4), 0.5): 1.1331089314318126854,
    ((0, 4), 1e3): 0.0031368849738579743768,
    ((2, 2), 3.0): 0.090668781838861254038,
    ((2, 2), 1e3): 1.5676578741631644817e-6,
}


@pytest.mark.parametrize("key", sorted(ORACLE))
def test_closed_forms_match_frozen_values(key):
    ix, r = key
    assert eval_I(ix, r) == pytest.approx(ORACLE[key], rel=1e-13, abs=1e-16)


def test_table_has_fifteen_entries():
    assert len(TABLE_IDS) == 15
    assert {(t.i, t.j) for t in TABLE_IDS} == {(i, j) for i in range(5) for j in range(5) if i + j <= 4}


def test_odd_cosine_power_vanishes():
    for ix in TABLE_IDS:
        if ix.i % 2:
            assert eval_I(ix, 1.3) == 0.0
            assert abs(quadrature_oracle(ix, 1.3)) < 1e-13


def test_lower_half_parity():
    for ix in TABLE_IDS:
        assert eval_J(ix, 0.7) == (-1) ** (ix.i + ix.j) * eval_I(ix, 0.7)


@pytest.mark.parametrize("r", [1e-6, 1e-4, 0.0999, 0.1, 0.1001])
def test_series_switch_is_seamless(r):
    for ix in TABLE_IDS:
        assert eval_I(ix, r) == pytest.approx(quadrature_oracle(ix, r), rel=1e-11, abs=1e-13)


@settings(max_examples=40, deadline=None)
@given(st.floats(min_value=-3, max_value=3))
def test_closed_forms_against_quadrature(logr):
    r = 10.0 ** logr
    for ix in TABLE_IDS:
        for half, closed in (("upper", eval_I), ("lower", eval_J)):
            q = quadrature_oracle(ix, r, half)
            c = closed(ix, r)
            assert abs(c - q) <= 1e-10 * max(1.0, abs(q))


def test_recurrence_identities():
    # cos^2 + sin^2 = 1 relations between entries
    for r in (0.01, 1.0, 50.0):
        assert eval_I((0, 2), r) + eval_I((2, 0), r) == pytest.approx(eval_I((0, 0), r), rel=1e-14)
        assert eval_I((2, 2), r) + eval_I((4, 0), r) == pytest.approx(eval_I((2, 0), r), rel=1e-14)
        assert r * r * eval_I((2, 0), r) + eval_I((0, 0), r) == pytest.approx(math.pi, rel=1e-14)


def test_index_validation():
    with pytest.raises(ValueError):
        MonomialIntegralId(3, 2)
    with pytest.raises(ValueError):
        eval_I((0, 0), 0.0)
    with pytest.raises(ValueError):
        eval_I((0, 0), float("nan"))
    with pytest.raises(ValueError):
        quadrature_oracle((0, 0), 1.0, "left")


def test_adaptive_quad_polynomial_and_peak():
    val, _ = adaptive_quad(lambda t: t**3, 0.0, 2.0)
    assert val == pytest.approx(4.0, rel=1e-15)
    # sharply peaked integrand from the large-r regime
    r = 1e3
    val, _ = adaptive_quad(lambda t: 1 / (r * r * np.cos(t) ** 2 + 1), 0.0, math.pi, abs_tol=1e-14)
    assert val == pytest.approx(math.pi / math.sqrt(1 + r * r), rel=1e-10)


def test_integral_table_rows():
    rows = integral_table([0.5, 2.0])
    assert len(rows) == 30
    assert max(row["abs_err"] for row in rows) < 1e-12
