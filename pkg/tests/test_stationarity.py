import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from macrounc.exceptions import SingularityError, SizeError
from macrounc.series import Series
from macrounc.stationarity import (adf_test, critical_values, newey_west_bandwidth, pp_test)


@pytest.fixture(scope="module")
def noisy_walk():
    walk = np.cumsum(np.random.default_rng(11).standard_normal(250)) * 0.5
    return walk + np.random.default_rng(12).standard_normal(250)


# Reference statistics frozen from statsmodels.adfuller (AIC, maxlag=8) and
# arch.unitroot.PhillipsPerron on the same series.
ADF_REF = {"none": -2.202211391110912, "constant": -2.475498805416556,
           "constant+trend": -2.9201815563958378}
PP_REF = {
    ("none", 0): -4.764512752137016, ("none", 4): -4.104650295243938,
    ("none", 9): -4.617165592818221, ("constant", 0): -5.477460316888464,
    ("constant", 4): -4.982000534721546, ("constant", 9): -5.668229711572244,
    ("constant+trend", 0): -6.221353974855612, ("constant+trend", 4): -5.914097352434628,
    ("constant+trend", 9): -6.751134708516188,
}


@pytest.mark.parametrize("spec", list(ADF_REF))
def test_adf_against_reference(noisy_walk, spec):
    r = adf_test(noisy_walk, spec, max_lags=8)
    assert r.statistic == pytest.approx(ADF_REF[spec], abs=1e-10)
    assert r.lags_or_bandwidth == 3
    assert adf_test(noisy_walk, spec, fixed_lags=3).statistic == pytest.approx(ADF_REF[spec],
                                                                              abs=1e-10)


@pytest.mark.parametrize("key", list(PP_REF))
def test_pp_against_reference(noisy_walk, key):
    spec, bw = key
    assert pp_test(noisy_walk, spec, bw).statistic == pytest.approx(PP_REF[key], abs=1e-10)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**31), st.sampled_from(["none", "constant", "constant+trend"]))
def test_pp_without_correction_is_the_df_ratio(seed, spec):
    x = np.cumsum(np.random.default_rng(seed).standard_normal(120))
    assert pp_test(x, spec, 0).statistic == pytest.approx(
        adf_test(x, spec, fixed_lags=0).statistic, rel=1e-10)


def test_critical_values_interpolate_towards_asymptote():
    small, big = critical_values("constant", 25), critical_values("constant", 10**7)
    assert small[5] == pytest.approx(-3.00)
    assert big[5] == pytest.approx(-2.86, abs=1e-4)
    for spec in ("none", "constant", "constant+trend"):
        cv = critical_values(spec, 300)
        assert cv[1] < cv[5] < cv[10] < 0
    assert critical_values("constant+trend", 300)[5] < critical_values("constant", 300)[5] \
        < critical_values("none", 300)[5]


def test_bandwidth_rule():
    assert newey_west_bandwidth(100) == 4
    assert newey_west_bandwidth(500) == 5


def test_stationary_ar_rejects_and_walk_does_not():
    g = np.random.default_rng(1)
    e = g.standard_normal(600)
    ar = np.zeros(600)
    for t in range(1, 600):
        ar[t] = 0.5 * ar[t - 1] + e[t]
    assert adf_test(Series("ar", "2000-01", ar)).reject_unit_root[5]
    assert not adf_test(np.cumsum(e) + 100).reject_unit_root[10]
    assert pp_test(ar).reject_unit_root[1]


def test_errors(rng):
    with pytest.raises(SingularityError):
        adf_test(np.ones(100))
    with pytest.raises(ValueError):
        adf_test(rng.standard_normal(100), "drift")
    with pytest.raises(SizeError):
        pp_test(rng.standard_normal(100), bandwidth=-2)
    with pytest.raises(SizeError):
        adf_test(rng.standard_normal(8))
