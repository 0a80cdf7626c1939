import json
from fractions import Fraction as Fr

import pytest
from hypothesis import given, settings, strategies as st

from avglab.coefficients import (INERT_MU, MONOMIALS, OMEGA_INDICES, PIVOTS, NuVector,
                                 PerturbationCoefficients, ab_from_nu, det_exact,
                                 jacobian_determinant, jacobian_matrix, mu_from_omega,
                                 nu_from_ab, omega_from_ab, smooth_restriction,
                                 solve_exact)

fractions = st.fractions(min_value=-10, max_value=10, max_denominator=12)


@st.composite
def coefficient_sets(draw):
    tables = [draw(st.dictionaries(st.sampled_from(MONOMIALS), fractions, max_size=10))
              for _ in range(4)]
    return PerturbationCoefficients(a1=tables[0], b1=tables[1], a2=tables[2], b2=tables[3])


def test_index_sets():
    assert len(MONOMIALS) == 10
    assert len(OMEGA_INDICES) == 14
    assert INERT_MU == {(1, 0), (1, 1), (3, 0), (1, 2), (3, 1), (1, 3)}


def test_determinant_is_one_half():
    assert jacobian_determinant() == Fr(1, 2)
    assert isinstance(jacobian_determinant(), Fr)


def test_pivot_order_only_changes_sign():
    swapped = (PIVOTS[1], PIVOTS[0]) + PIVOTS[2:]
    assert jacobian_determinant(swapped) == Fr(-1, 2)


def test_det_exact_small():
    assert det_exact([[2, 1], [1, 1]]) == 1
    assert det_exact([[0, 1], [1, 0]]) == -1
    assert det_exact([[1, 2], [2, 4]]) == 0
    assert solve_exact([[2, 1], [1, 3]], [3, 5]) == [Fr(4, 5), Fr(7, 5)]


def test_hand_computed_chain():
    # P1 = x, Q1 = y/2: omega^1_20 = 1, omega^1_02 = 1/2, so nu3 = 1/2 and nu7 = 1 - 1/2
    c = PerturbationCoefficients(a1={(1, 0): 1}, b1={(0, 1): Fr(1, 2)})
    om = omega_from_ab(c)
    assert om.omega1[(2, 0)] == 1 and om.omega1[(0, 2)] == Fr(1, 2)
    assert nu_from_ab(c) == NuVector.of(0, 0, Fr(1, 2), 0, 0, 0, Fr(1, 2))


def test_lower_side_sign_flip():
    # an odd total degree on side 2 enters mu with a minus sign
    c = PerturbationCoefficients(b2={(0, 0): 1})
    mu = mu_from_omega(omega_from_ab(c))
    assert mu[(0, 1)] == -1
    assert nu_from_ab(c) == NuVector.of(0, 0, 0, 0, -1, 0, 0)


def test_inert_mu_does_not_reach_nu():
    c = PerturbationCoefficients(a1={(0, 0): 3, (2, 0): 5, (0, 2): 7})  # omega_10, omega_30, omega_12
    mu = mu_from_omega(omega_from_ab(c))
    assert {k for k, v in mu.mu.items() if v} <= INERT_MU and any(mu.inert.values())
    assert nu_from_ab(c).is_zero()


@settings(max_examples=60, deadline=None)
@given(coefficient_sets())
def test_nu_is_linear(c):
    doubled = PerturbationCoefficients(
        **{side: {k: 2 * v for k, v in getattr(c, side).items()} for side in ("a1", "b1", "a2", "b2")})
    assert nu_from_ab(doubled) == nu_from_ab(c).scale(2)


@settings(max_examples=60, deadline=None)
@given(st.lists(fractions, min_size=7, max_size=7))
def test_inverse_map_round_trip(vals):
    nu = NuVector(tuple(vals))
    c = ab_from_nu(nu)
    assert nu_from_ab(c) == nu
    assert c.a2 == {k: 0 for k in MONOMIALS} and c.b2 == {k: 0 for k in MONOMIALS}


def test_smooth_restriction_kills_odd_terms():
    nu = NuVector.of(1, 2, 3, 4, 5, 6, 7)
    s = smooth_restriction(ab_from_nu(nu))
    out = nu_from_ab(s)
    assert out[0] == out[4] == out[5] == 0
    assert [out[i] for i in (1, 2, 3, 6)] == [4, 6, 8, 14]


def test_jacobian_rows_shape():
    m = jacobian_matrix()
    assert len(m) == 7 and all(len(row) == 7 for row in m)


def test_json_round_trip():
    c = PerturbationCoefficients(a1={(2, 1): Fr(-3, 7)}, b2={(0, 3): Fr(5, 2)})
    again = PerturbationCoefficients.from_json(c.to_json())
    assert again == c
    assert json.loads(c.to_json())["a1"]["2,1"] == "-3/7"


def test_nu_list_round_trip():
    nu = NuVector.of(Fr(1, 3), -2, 0, 0, 0, 0, Fr(7, 11))
    assert NuVector.from_list(nu.to_list()) == nu
    assert NuVector.from_list(["1/3", "-2", "0", "0", "0", "0", "7/11"]) == nu


def test_bad_inputs():
    with pytest.raises(KeyError):
        PerturbationCoefficients(a1={(4, 0): 1})
    with pytest.raises((ValueError, TypeError)):
        NuVector.of(1, 2, 3)
    with pytest.raises(ValueError):
        PerturbationCoefficients(a1={(0, 0): float("nan")})


def test_from_dict_rejects_foreign_keys():
    with pytest.raises(KeyError):
        PerturbationCoefficients.from_dict({"meta": {}, "data": {}})
