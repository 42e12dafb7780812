import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose
from scipy.optimize import minimize as scipy_minimize

from macrounc.egarch import (EgarchParams, ExogTerm, MeanSpec, build_equation_data,
                             egarch_recursion, extract_uncertainty, fit_equation,
                             fit_inflation_model, fit_output_model, inflation_spec,
                             negative_log_likelihood, output_spec)
from macrounc.exceptions import NumericalFailure, SizeError
from macrounc.optim import OptimOptions
from macrounc.series import Series, month
from macrounc.simulate import DgpSpec, simulate_ar_egarch, simulate_bivariate_system

TRUTH = EgarchParams(-0.5, 0.8, 0.3, 0.4)
AR1 = MeanSpec(own_lags=(1,), cross_lags=())


@pytest.fixture(scope="module")
def ar1_fit():
    path = simulate_ar_egarch(DgpSpec(AR1, {"a0": 0.2, "a1": 0.4}, TRUTH, T=1500, seed=42))
    data = build_equation_data(path.series, AR1)
    return data, fit_equation(data)


def test_spec_labels():
    assert inflation_spec().labels() == ("a0",) + tuple(f"a{i}" for i in range(1, 13)) + (
        "rho1", "eta", "tau")
    out = output_spec(own_lags=(1, 2), eu_lag=None)
    assert out.labels("b", "delta") == ("b0", "b1", "b2", "delta1")
    assert inflation_spec(interest_lag=None, oil_lag=None, cross_lags=()).max_lag == 12
    with pytest.raises(SizeError):
        MeanSpec(own_lags=(13,), cross_lags=())


def test_recursion_start_and_first_step():
    eps = np.array([1.0, -2.0, 0.5])
    h = egarch_recursion(TRUTH, eps, 2.0)
    assert h[0] == 2.0
    u = 1.0 / math.sqrt(2.0)
    assert h[1] == pytest.approx(math.exp(-0.5 + 0.8 * math.log(2.0) + 0.3 * u + 0.4 * u))


def test_recursion_overflow_names_the_index():
    with pytest.raises(NumericalFailure, match="index"):
        egarch_recursion(EgarchParams(50.0, 0.99, 0.0, 0.0), np.ones(40), 1.0)
    with pytest.raises(ValueError):
        egarch_recursion(TRUTH, np.ones(4), 0.0)


@settings(max_examples=30, deadline=None)
@given(st.floats(-0.4, 0.4), st.floats(0, 0.4), st.floats(0.1, 4))
def test_gamma_sets_the_asymmetry(gamma, beta, shock):
    p = EgarchParams(0.0, 0.5, beta, gamma)
    pos = egarch_recursion(p, [shock, 0.0], 1.0)[1]
    neg = egarch_recursion(p, [-shock, 0.0], 1.0)[1]
    assert math.log(pos) - math.log(neg) == pytest.approx(2 * gamma * shock, abs=1e-12)


def test_equation_data_alignment():
    y = Series("y", "2000-01", np.arange(60.0))
    z = Series("z", "1999-12", np.arange(100.0, 161.0))
    oil = Series("oil", "2000-01", np.arange(60.0) * 2)
    spec = MeanSpec(own_lags=(1, 2), cross_lags=(1,), exogenous_terms=(ExogTerm("oil", 1),))
    d = build_equation_data(y, spec, cross=z, exogenous={"oil": oil})
    assert d.start == month("2000-03")
    assert d.X.labels == ("a0", "a1", "a2", "rho1", "oil")
    assert d.y[0] == 2.0
    assert_allclose(d.X.values[0], [1.0, 1.0, 0.0, 102.0, 2.0])
    with pytest.raises(SizeError):
        build_equation_data(Series("y", "2000-01", np.arange(20.0)), spec, cross=z,
                            exogenous={"oil": oil})
    with pytest.raises((KeyError, ValueError)):
        build_equation_data(y, spec, cross=z)


def test_likelihood_at_homoscedastic_point_and_overflow(ar1_fit):
    data, _ = ar1_fit
    b = np.linalg.lstsq(data.X.values, data.y, rcond=None)[0]
    e = data.y - data.X.values @ b
    s2 = e @ e / e.size
    nll = negative_log_likelihood(b, EgarchParams(math.log(s2), 0.0, 0.0, 0.0), data)
    assert nll == pytest.approx(0.5 * e.size * (math.log(2 * math.pi) + math.log(s2) + 1),
                                rel=1e-12)
    with pytest.raises(NumericalFailure):
        negative_log_likelihood(b, EgarchParams(60.0, 0.999, 5.0, 0.0), data)


def test_fit_recovers_parameters(ar1_fit):
    _, fit = ar1_fit
    assert fit.converged
    v = fit.variance_params
    assert fit.coefficient("a1") == pytest.approx(0.4, abs=0.05)
    assert v.alpha1 == pytest.approx(0.8, abs=0.1)
    assert v.gamma == pytest.approx(0.4, abs=0.15)
    assert v.stationary and fit.gamma_sign == 1
    assert np.all(fit.mean_std_errors > 0) and np.all(fit.variance_std_errors > 0)
    assert fit.log_likelihood >= fit.homoscedastic_log_likelihood


def test_fit_matches_an_independent_optimizer(ar1_fit):
    data, fit = ar1_fit
    k = data.X.n_cols

    def nll(theta):
        try:
            return negative_log_likelihood(theta[:k], EgarchParams.from_array(theta[k:]), data,
                                           h0=fit.h0)
        except NumericalFailure:
            return np.inf

    start = np.concatenate([fit.mean_coefficients, fit.variance_params.as_array()]) + 0.02
    ref = scipy_minimize(nll, start, method="Nelder-Mead",
                         options=dict(maxiter=20000, xatol=1e-9, fatol=1e-11))
    assert -fit.log_likelihood <= ref.fun + 1e-6


def test_coefficient_table_and_diagnostics(ar1_fit):
    _, fit = ar1_fit
    rows = fit.coefficient_table()
    assert [r["label"] for r in rows] == ["a0", "a1", "alpha0", "alpha1", "beta", "gamma"]
    gamma = rows[-1]
    assert gamma["letter"] == "a" and gamma["p_value"] < 0.01
    assert set(fit.diagnostics) == {"Q12", "Q2_1", "Q2_12"}
    assert len(fit.h_path) == len(fit.std_residuals) == fit.n_obs
    assert_allclose(fit.std_residuals.values, fit.residuals / np.sqrt(fit.h_path.values))


def test_robust_standard_errors(ar1_fit):
    data, fit = ar1_fit
    robust = fit_equation(data, robust=True)
    assert robust.robust
    assert np.all(np.isfinite(robust.variance_std_errors))
    assert_allclose(robust.variance_params.as_array(), fit.variance_params.as_array(), atol=1e-6)


def test_unconverged_fit_has_no_letters(ar1_fit):
    data, _ = ar1_fit
    fit = fit_equation(data, OptimOptions(max_iter=1, simplex=False))
    assert not fit.converged
    assert all(r["letter"] == "" for r in fit.coefficient_table())
    with pytest.raises(ValueError):
        extract_uncertainty(fit)
    assert len(extract_uncertainty(fit, "h", allow_unconverged=True)) == fit.n_obs


def test_system_fits_name_their_uncertainty():
    pi_spec = DgpSpec(MeanSpec(own_lags=(1,), cross_lags=(), exogenous_terms=(ExogTerm("i", 1, "eta"),)),
                      {"a0": 1.0, "a1": 0.5, "eta": -0.3}, EgarchParams(0.2, 0.7, 0.2, 0.2),
                      T=400, seed=(1, 1), name="pi")
    y_spec = DgpSpec(MeanSpec(own_lags=(1,), cross_lags=(), exogenous_terms=(ExogTerm("y_eu", 1, "lambda"),)),
                     {"a0": 1.0, "a1": 0.3, "lambda": 0.5}, EgarchParams(0.5, 0.6, 0.2, 0.1),
                     T=400, seed=(1, 2), name="y")
    sp, sy = simulate_bivariate_system(pi_spec, y_spec, {"rho": {1: 0.05}, "delta": {1: -0.1}})
    fp = fit_inflation_model(sp.series, sy.series, i=sp.regressors["i"],
                             spec=inflation_spec(own_lags=(1,), oil_lag=None))
    fy = fit_output_model(sy.series, sp.series, y_eu=sy.regressors["y_eu"],
                          spec=output_spec(own_lags=(1,)))
    assert fp.converged and fy.converged
    assert extract_uncertainty(fp).name == "h_pi"
    assert extract_uncertainty(fy).name == "h_y"
    assert fp.coefficient("eta") == pytest.approx(-0.3, abs=0.15)
    assert "lambda" in fy.labels and "delta1" in fy.labels
