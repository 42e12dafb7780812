import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from macrounc.distributions import (betainc, chi_square_cdf, chi_square_sf, f_cdf, f_sf,
                                    gammainc_lower, gammainc_upper, normal_sf)

mpmath.mp.dps = 40

# 95% chi-square quantile for 12 degrees of freedom, from a 40-digit root solve.
CHI2_95_12 = 21.02606981748307


def test_chi_square_at_zero():
    for k in (1, 2, 7, 40):
        assert chi_square_cdf(0.0, k) == 0.0
        assert chi_square_sf(0.0, k) == 1.0


def test_chi_square_reference_quantile():
    ref = mpmath.findroot(lambda q: mpmath.gammainc(6, 0, q / 2, regularized=True) - 0.95, 21)
    assert float(ref) == pytest.approx(CHI2_95_12, abs=1e-12)
    assert chi_square_cdf(CHI2_95_12, 12) == pytest.approx(0.95, abs=1e-12)


@pytest.mark.parametrize("d", [1, 2, 5, 30, 200])
def test_equal_dof_f_at_one_is_half(d):
    assert f_cdf(1.0, d, d) == pytest.approx(0.5, abs=1e-13)


@given(st.floats(0.05, 80), st.floats(0, 200))
def test_gamma_against_mpmath(a, x):
    ref = float(mpmath.gammainc(a, 0, x, regularized=True))
    assert gammainc_lower(a, x) == pytest.approx(ref, abs=1e-12)
    assert gammainc_lower(a, x) + gammainc_upper(a, x) == pytest.approx(1.0, abs=1e-13)


@given(st.floats(0.05, 60), st.floats(0.05, 60), st.floats(0, 1))
def test_beta_against_mpmath(a, b, x):
    ref = float(mpmath.betainc(a, b, 0, x, regularized=True))
    assert betainc(a, b, x) == pytest.approx(ref, abs=1e-12)


@given(st.floats(0.05, 20), st.floats(0.05, 20), st.floats(0, 1).filter(lambda x: 1 - (1 - x) == x))
def test_beta_reflection(a, b, x):
    assert betainc(a, b, x) + betainc(b, a, 1 - x) == pytest.approx(1.0, abs=1e-13)


@given(st.integers(1, 50), st.integers(1, 300), st.floats(0, 50))
def test_f_cdf_and_sf_are_complementary_and_bounded(d1, d2, x):
    c, s = f_cdf(x, d1, d2), f_sf(x, d1, d2)
    assert 0 <= c <= 1 and 0 <= s <= 1
    assert c + s == pytest.approx(1.0, abs=1e-13)


def test_cdfs_are_monotone():
    xs = np.linspace(0, 60, 301)
    assert np.all(np.diff([chi_square_cdf(x, 9) for x in xs]) >= 0)
    assert np.all(np.diff([f_cdf(x / 10, 4, 120) for x in xs]) >= 0)


def test_small_tail_keeps_relative_accuracy():
    ref = float(mpmath.gammainc(2, 60, mpmath.inf, regularized=True))
    assert chi_square_sf(120.0, 4) == pytest.approx(ref, rel=1e-10)


def test_normal_sf():
    assert normal_sf(0.0) == 0.5
    assert normal_sf(1.959963984540054) == pytest.approx(0.025, abs=1e-15)


def test_negative_argument_has_zero_mass():
    assert chi_square_cdf(-1.0, 3) == 0.0
    assert f_sf(-2.0, 3, 4) == 1.0


@pytest.mark.parametrize("call", [lambda: chi_square_cdf(1.0, 0), lambda: f_cdf(1.0, 2, 0.5),
                                  lambda: betainc(1.0, 1.0, 1.5), lambda: gammainc_lower(0, 1)])
def test_domain_errors(call):
    with pytest.raises(ValueError):
        call()


def test_f_tail_beyond_the_rounding_of_its_argument():
    ref = float(mpmath.betainc(0.5, 0.5, 0, 1e-24, regularized=True))
    assert f_cdf(1e-24, 1, 1) == pytest.approx(ref, rel=1e-12)
    assert 1.0 - f_sf(1e-24, 1, 1) == pytest.approx(ref, rel=1e-3)
