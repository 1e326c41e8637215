import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from thermoline.errors import DomainError, UnsupportedOrderError
from thermoline.special_functions import (
    MAX_ORDER,
    bessel_k,
    bessel_k_ratio,
    bessel_k_underflows,
    log_bessel_k,
)

# Frozen from mpmath quadrature of  int_0^inf exp(-x cosh t) cosh(nu t) dt
# (25 digits, finite cutoff where the integrand is below e^-400).
QUADRATURE_ORACLE_SCALED = [
    (0, 0.01, 4.76869402854446188),
    (1, 0.5, 2.73100970821178571),
    (2, 1.0, 4.41677005233341151),
    (4, 3.0, 6.14318577117762053),
    (8, 0.1, 71271328432880.0935),
    (5, 50.0, 0.226425539771847369),
]
K0_AT_1 = 0.421024438240708333
K1_OVER_K2_AT_1 = 0.37044117463141794


@pytest.mark.parametrize("order,x,expected", QUADRATURE_ORACLE_SCALED)
def test_scaled_values_match_quadrature_oracle(order, x, expected):
    assert bessel_k(order, x, scaled=True) == pytest.approx(expected, rel=1e-12)


def test_k0_at_one():
    assert bessel_k(0, 1.0) == pytest.approx(K0_AT_1, rel=1e-12)


def test_k2_from_recurrence():
    assert bessel_k(2, 1.0) == pytest.approx(bessel_k(0, 1.0) + 2 * bessel_k(1, 1.0), rel=1e-15)


def test_large_argument_matches_leading_asymptotics():
    x = 700.0
    leading = math.sqrt(math.pi / (2 * x)) * (1 - 1 / (8 * x))
    # next term of the expansion bounds the residual
    assert abs(bessel_k(0, x, scaled=True) / leading - 1) <= 1.01 * 9 / (128 * x * x)


@pytest.mark.parametrize("x", [1e-3, 0.3, 1.0, 1.999999, 2.0, 2.000001, 7.5, 40.0, 1e3, 1e6])
@pytest.mark.parametrize("order", range(MAX_ORDER + 1))
def test_against_mpmath_besselk(order, x):
    mpmath.mp.dps = 30
    expected = float(mpmath.besselk(order, x) * mpmath.exp(x))
    assert bessel_k(order, x, scaled=True) == pytest.approx(expected, rel=1e-12)


def test_scaled_survives_huge_argument():
    value = bessel_k(3, 1e15, scaled=True)
    assert value == pytest.approx(math.sqrt(math.pi / 2e15), rel=1e-13)


def test_unscaled_underflows_to_zero():
    assert bessel_k(2, 1e4) == 0.0
    assert bessel_k_underflows(2, 1e4)
    assert not bessel_k_underflows(2, 10.0)
    assert log_bessel_k(2, 1e4) == pytest.approx(math.log(bessel_k(2, 1e4, scaled=True)) - 1e4)


@pytest.mark.parametrize("x", [0.0, -1.0, math.inf, math.nan])
def test_domain_errors(x):
    with pytest.raises(DomainError):
        bessel_k(0, x)


@pytest.mark.parametrize("order", [MAX_ORDER + 1, 2.5, True])
def test_unsupported_order(order):
    with pytest.raises(UnsupportedOrderError):
        bessel_k(order, 1.0)


def test_negative_order_is_symmetric():
    assert bessel_k(-3, 2.0) == bessel_k(3, 2.0)


def test_ratio_examples():
    assert bessel_k_ratio(2, 2, 3.7) == 1.0
    assert bessel_k_ratio(1, 2, 1.0) == pytest.approx(K1_OVER_K2_AT_1, rel=1e-12)
    x = 1e12
    assert abs(bessel_k_ratio(1, 2, x) - (1 - 1.5 / x)) <= 1e-13


def test_ratio_finite_where_unscaled_underflows():
    r = bessel_k_ratio(1, 2, 1e15)
    assert bessel_k(1, 1e15) == 0.0
    assert 0 < r < 1 and math.isfinite(r)


def test_ratio_matches_quotient_where_representable():
    for x in (0.05, 1.0, 30.0, 300.0):
        for n, m in [(1, 2), (3, 2), (4, 2), (0, 5)]:
            assert bessel_k_ratio(n, m, x) == pytest.approx(bessel_k(n, x) / bessel_k(m, x), rel=1e-12)


@pytest.mark.parametrize("x", np.logspace(-2, 2, 41))
def test_recurrence_residual(x):
    for nu in range(1, 8):
        kp, k, km = (bessel_k(nu + 1, x, scaled=True), bessel_k(nu, x, scaled=True),
                     bessel_k(nu - 1, x, scaled=True))
        assert abs(kp - km - 2 * nu / x * k) / kp <= 1e-12


@settings(max_examples=200, deadline=None)
@given(x=st.floats(1e-3, 500.0), dx=st.floats(1e-3, 5.0), order=st.integers(0, MAX_ORDER - 1))
def test_monotonicity(x, dx, order):
    assert bessel_k(order, x + dx) < bessel_k(order, x)
    assert bessel_k(order + 1, x) > bessel_k(order, x)


@settings(max_examples=100, deadline=None)
@given(x=st.floats(1e-3, 700.0), order=st.integers(0, MAX_ORDER))
def test_scaled_unscaled_consistency(x, order):
    assert bessel_k(order, x) == pytest.approx(bessel_k(order, x, scaled=True) * math.exp(-x), rel=1e-14)
