import math
from fractions import Fraction as Fr

import pytest
from hypothesis import given, settings, strategies as st

from avglab.exact import PI_HI, PI_LO, PiNumber, as_fraction, format_fraction, pi_sum
from avglab.interval import Interval

finite = st.floats(min_value=-1e6, max_value=1e6, allow_nan=False)


def test_pi_bracket():
    import mpmath
    with mpmath.workdps(40):
        pi = mpmath.pi
        assert mpmath.mpf(PI_LO.numerator) / PI_LO.denominator < pi
        assert pi < mpmath.mpf(PI_HI.numerator) / PI_HI.denominator


def test_pi_degree_cap():
    with pytest.raises(OverflowError):
        PiNumber.pi() * PiNumber.pi() * PiNumber.pi()


def test_pinumber_arithmetic():
    x = PiNumber(1, 2)  # 1 + 2 pi
    y = PiNumber.pi(Fr(1, 2))
    assert x + y == PiNumber(1, Fr(5, 2))
    assert x * y == PiNumber(0, Fr(1, 2), 1)
    assert (x - x).is_zero()
    assert PiNumber(3).is_rational() and not y.is_rational()
    assert float(x) == pytest.approx(1 + 2 * math.pi, rel=1e-15)
    assert pi_sum([PiNumber(1), PiNumber.pi(), 2]) == PiNumber(3, 1)


def test_pinumber_enclosure_contains_value():
    x = PiNumber(Fr(-7, 3), 5, Fr(1, 9))
    lo, hi = x.enclosure()
    assert lo <= Fr(float(x)) <= hi or abs(float(lo) - float(x)) < 1e-14
    assert hi - lo < Fr(1, 10**18)


def test_fraction_helpers():
    assert as_fraction("3/4") == Fr(3, 4)
    assert as_fraction(0.5) == Fr(1, 2)
    assert format_fraction(Fr(-3, 4)) == "-3/4"


@settings(max_examples=200)
@given(finite, finite, finite, finite)
def test_interval_ops_contain_point_results(a, b, c, d):
    x, y = Interval(min(a, b), max(a, b)), Interval(min(c, d), max(c, d))
    for u in (a, b):
        for v in (c, d):
            assert (x + y).contains(u + v)
            assert (x - y).contains(u - v)
            assert (x * y).contains(u * v)
            if not y.contains_zero():
                assert (x / y).contains(u / v)


@settings(max_examples=200)
@given(st.floats(min_value=0, max_value=1e8))
def test_sqrt_atan_outward(v):
    x = Interval(v)
    assert x.sqrt().lo <= math.sqrt(v) <= x.sqrt().hi
    assert x.atan().lo <= math.atan(v) <= x.atan().hi
    assert x.atan().hi < math.pi / 2 + 1e-15


def test_rounding_is_outward():
    third = Interval(1.0) / Interval(3.0)
    assert third.lo < third.hi
    assert Fr(third.lo) < Fr(1, 3) < Fr(third.hi)
    tenth = Interval.from_fraction(Fr(1, 10))
    assert Fr(tenth.lo) <= Fr(1, 10) <= Fr(tenth.hi)


def test_sign_and_powers():
    assert Interval(1, 2).sign() == 1
    assert Interval(-2, -1).sign() == -1
    assert Interval(-1, 2).sign() == 0
    sq = Interval(-1, 2) ** 2
    assert sq.lo == 0.0 and sq.hi >= 4.0
    cube = Interval(-1, 2) ** 3
    assert cube.lo <= -1 and cube.hi >= 8


def test_division_by_zero_interval():
    with pytest.raises(ZeroDivisionError):
        Interval(1.0) / Interval(-1.0, 1.0)


def test_intersect():
    z = Interval(0, 2).intersect(Interval(1, 3))
    assert (z.lo, z.hi) == (1, 2)
