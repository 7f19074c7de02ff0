"""Bessel evaluation against an extended-precision series oracle."""
import math

import mpmath
import numpy as np
import pytest

from socnls.besselj import (
    asymptotic_gap,
    bessel_j,
    bessel_j_array,
    bessel_j_signed,
    bessel_jprime_array,
)
from socnls.errors import DomainError


def oracle_j(l, x, terms=200):
    """Plain power series in 50-digit arithmetic, summed term by term."""
    with mpmath.workdps(50):
        xm = mpmath.mpf(x)
        acc = mpmath.mpf(0)
        for n in range(terms):
            term = ((-1) ** n / (mpmath.factorial(n) * mpmath.gamma(n + l + 1))
                    * (xm / 2) ** (2 * n + l))
            acc += term
        return float(acc)


ORACLE_POINTS = [
    (0, 0.5), (0, 5.0), (0, 13.7), (0, 80.0),
    (1, 0.1), (1, 25.0), (3, 7.5), (5, 40.0),
    (8, 2.0), (12, 60.0), (20, 15.0), (33, 90.0),
]


@pytest.mark.parametrize("l,x", ORACLE_POINTS)
def test_against_series_oracle(l, x):
    ref = oracle_j(l, x)
    val = bessel_j(l, x)
    assert abs(val - ref) <= 1e-12 * max(abs(ref), 1e-30)


def test_large_argument_against_mpmath():
    # deep in the Miller-recurrence regime the 200-term series oracle would
    # need more terms, so compare to mpmath's own besselj
    for l, x in [(0, 500.0), (4, 2500.0), (16, 9000.0), (64, 9999.0)]:
        ref = float(mpmath.besselj(l, x))
        assert abs(bessel_j(l, x) - ref) <= 1e-12 * max(abs(ref), 1e-16)


def test_values_at_zero():
    assert bessel_j(0, 0.0) == 1.0
    for l in (1, 2, 7, 30):
        assert bessel_j(l, 0.0) == 0.0


def test_three_term_recurrence():
    for l in range(1, 9):
        for x in (0.5, 5.0, 50.0):
            lhs = (2 * l / x) * bessel_j(l, x)
            rhs = bessel_j(l - 1, x) + bessel_j(l + 1, x)
            assert abs(lhs - rhs) < 1e-10


def test_bessel_ode_residual():
    # x^2 J'' + x J' + (x^2 - l^2) J = 0 with derivatives from recurrences
    xs = np.linspace(0.3, 60.0, 200)
    for l in (0, 1, 2, 5, 9):
        j = bessel_j_array(l, xs)
        jp = bessel_jprime_array(l, xs)
        jpp = 0.5 * (bessel_jprime_array(l - 1, xs) - bessel_jprime_array(l + 1, xs))
        resid = xs**2 * jpp + xs * jp + (xs**2 - l**2) * j
        assert np.abs(resid).max() < 1e-8


def test_array_matches_scalar():
    xs = np.array([0.0, 0.3, 11.9, 12.1, 70.0, 900.0])
    for l in (0, 2, 15):
        arr = bessel_j_array(l, xs)
        for x, v in zip(xs, arr):
            assert v == bessel_j(l, float(x))


def test_negative_order_reflection():
    xs = np.array([0.7, 4.0, 33.0])
    for l in (1, 2, 5):
        expect = (-1.0) ** l * bessel_j_array(l, xs)
        assert np.allclose(bessel_j_signed(-l, xs), expect, rtol=0, atol=1e-15)


def test_domain_errors():
    with pytest.raises(DomainError):
        bessel_j(-1, 1.0)
    with pytest.raises(DomainError):
        bessel_j(65, 1.0)
    with pytest.raises(DomainError):
        bessel_j(0, -0.5)
    with pytest.raises(DomainError):
        bessel_j(0, 2.0e4)
    with pytest.raises(DomainError):
        asymptotic_gap(0, 5.0)


def test_asymptotic_gap_window():
    # x * gap stays bounded above; the correction oscillates through zeros,
    # so the lower bound is asserted blockwise (the envelope does not decay
    # to zero anywhere in the sweep)
    xs = np.linspace(20.0, 2000.0, 300)
    scaled = np.array([x * asymptotic_gap(0, x) for x in xs])
    assert scaled.max() <= 1.0
    for block in np.array_split(scaled, 10):
        assert block.max() > 1e-4


def test_asymptotic_gap_order_one():
    gap = asymptotic_gap(1, 100.0)
    assert gap <= 1.0 / 100.0


def test_continuity_across_algorithm_handover():
    from socnls.besselj import _series_cut

    from socnls import kernels

    for l in (0, 3, 10, 40):
        cut = _series_cut(l)
        by_series = kernels.bessel_scalar(l, cut, cut + 1.0)
        by_miller = kernels.bessel_scalar(l, cut, cut - 1.0)
        assert abs(by_series - by_miller) < 1e-12
