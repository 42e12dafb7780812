import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose
from scipy import stats

from macrounc.egarch import EgarchParams, ExogTerm, MeanSpec, egarch_recursion
from macrounc.exceptions import SizeError
from macrounc.simulate import (DgpSpec, make_rng, simulate_ar_egarch, simulate_bivariate_system,
                               standard_normals)

PARAMS = EgarchParams(-0.5, 0.8, 0.3, 0.4)
AR1 = MeanSpec(own_lags=(1,), cross_lags=())


def _spec(**kw):
    base = dict(mean_spec=AR1, coefficients={"a0": 0.1, "a1": 0.4}, variance_params=PARAMS,
                T=300, seed=5)
    base.update(kw)
    return DgpSpec(**base)


def test_same_seed_same_path_and_different_seeds_differ():
    a, b = simulate_ar_egarch(_spec()), simulate_ar_egarch(_spec())
    assert_allclose(a.series.values, b.series.values, atol=0)
    c = simulate_ar_egarch(_spec(seed=(5, 1)))
    assert not np.allclose(a.series.values, c.series.values)


def test_normals_are_standard():
    z = standard_normals(make_rng(1), 20000)
    assert abs(z.mean()) < 0.03 and abs(z.std() - 1) < 0.02
    assert stats.kstest(z, "norm").pvalue > 0.01
    assert_allclose(standard_normals(make_rng(1), 5), z[:5], atol=0)


def test_path_is_consistent_with_the_recursion():
    sim = simulate_ar_egarch(_spec())
    assert len(sim.series) == 300 and sim.h.shape == (300,)
    h = egarch_recursion(PARAMS, sim.residuals, sim.h[0])
    assert_allclose(h, sim.h, rtol=1e-12)
    assert_allclose(sim.residuals, np.sqrt(sim.h) * sim.z, rtol=1e-12)
    x = sim.series.values
    assert_allclose(x[1:], 0.1 + 0.4 * x[:-1] + sim.residuals[1:], atol=1e-12)


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 2**31))
def test_innovations_have_unit_conditional_scale(seed):
    sim = simulate_ar_egarch(_spec(seed=seed, T=2000))
    u = sim.residuals / np.sqrt(sim.h)
    assert abs(u.std() - 1) < 0.1


def test_exogenous_regressors_are_returned():
    spec = MeanSpec(own_lags=(1,), cross_lags=(1,), exogenous_terms=(ExogTerm("oil", 1, "tau"),))
    sim = simulate_ar_egarch(_spec(mean_spec=spec,
                                   coefficients={"a0": 0, "a1": 0.3, "rho1": 0.2, "tau": -0.5}))
    assert set(sim.regressors) == {"cross", "oil"}
    oil = sim.regressors["oil"].values
    assert len(oil) == 300
    assert np.corrcoef(oil[1:], oil[:-1])[0, 1] == pytest.approx(0.5, abs=0.15)


def test_validation():
    with pytest.raises(SizeError):
        _spec(T=10)
    with pytest.raises(ValueError, match="a7"):
        _spec(coefficients={"a0": 0.1, "a7": 0.2})
    # omitted coefficients are zero
    sim = simulate_ar_egarch(_spec(coefficients={"a0": 0.1}))
    assert_allclose(sim.series.values, 0.1 + sim.residuals, atol=1e-12)


def test_bivariate_without_feedback_equals_univariate():
    sp = _spec(name="pi", seed=(9, 1))
    sy = _spec(name="y", seed=(9, 2), coefficients={"a0": 0.5, "a1": -0.2})
    bp, by = simulate_bivariate_system(sp, sy)
    assert_allclose(bp.series.values, simulate_ar_egarch(sp).series.values, atol=1e-12)
    assert_allclose(by.series.values, simulate_ar_egarch(sy).series.values, atol=1e-12)


def test_bivariate_feedback_enters_the_mean():
    sp = _spec(name="pi", seed=(9, 1))
    sy = _spec(name="y", seed=(9, 2))
    bp, by = simulate_bivariate_system(sp, sy, {"rho": {1: 0.3}, "delta": {2: -0.2}})
    p, y = bp.series.values, by.series.values
    assert_allclose(p[2:], 0.1 + 0.4 * p[1:-1] + 0.3 * y[1:-1] + bp.residuals[2:], atol=1e-10)
    assert_allclose(y[2:], 0.1 + 0.4 * y[1:-1] - 0.2 * p[:-2] + by.residuals[2:], atol=1e-10)
    with pytest.raises(ValueError):
        simulate_bivariate_system(_spec(mean_spec=MeanSpec(own_lags=(1,), cross_lags=(1,)),
                                        coefficients={"a0": 0, "a1": 0.1, "rho1": 0.1}), sy)
