import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose

from macrounc.optim import (OptimOptions, fd_gradient, minimize, nelder_mead, numerical_hessian,
                            numerical_jacobian)


def rosenbrock(x):
    return 100.0 * (x[1] - x[0] ** 2) ** 2 + (1 - x[0]) ** 2


def test_one_dimensional_quadratic():
    r = minimize(lambda x: (x[0] - 3.0) ** 2, [0.0])
    assert r.converged
    assert r.x_min[0] == pytest.approx(3.0, abs=1e-6)
    assert r.f_min == pytest.approx(0.0, abs=1e-10)


def test_rosenbrock():
    r = minimize(rosenbrock, [-1.2, 1.0])
    assert r.converged and r.termination_reason in ("gradient_tol", "step_tol")
    assert_allclose(r.x_min, [1.0, 1.0], atol=1e-5)


def test_without_simplex_stage():
    r = minimize(rosenbrock, [-1.2, 1.0], OptimOptions(simplex=False, max_iter=2000))
    assert r.converged and r.simplex_iterations == 0
    assert_allclose(r.x_min, [1.0, 1.0], atol=1e-5)


@settings(max_examples=20, deadline=None)
@given(st.lists(st.floats(-50, 50), min_size=3, max_size=3))
def test_translation_invariance(shift):
    shift = np.array(shift)
    A = np.array([[4.0, 1.0, 0.0], [1.0, 3.0, 0.5], [0.0, 0.5, 2.0]])

    def f(x):
        return 0.5 * x @ A @ x

    base = minimize(f, np.ones(3))
    moved = minimize(lambda x: f(x - shift), np.ones(3) + shift)
    assert_allclose(moved.x_min - shift, base.x_min, atol=1e-5)
    assert moved.f_min == pytest.approx(base.f_min, abs=1e-9)


def test_max_iter_is_reported():
    r = minimize(rosenbrock, [-1.2, 1.0], OptimOptions(simplex=False, max_iter=3))
    assert not r.converged and r.termination_reason == "max_iter"
    assert np.isfinite(r.f_min)


def test_non_finite_start_is_a_numerical_failure():
    r = minimize(lambda x: np.nan, [0.0, 0.0])
    assert not r.converged and r.termination_reason == "numerical_failure"


def test_regions_returning_inf_are_avoided():
    def f(x):
        if x[0] <= 0:
            return np.inf
        return x[0] - np.log(x[0])

    r = minimize(f, [3.0])
    assert r.converged and r.x_min[0] == pytest.approx(1.0, abs=1e-5)


def test_exceptions_in_the_objective_count_as_infinite():
    def f(x):
        if x[0] < -1:
            raise OverflowError
        return (x[0] + 0.5) ** 2

    r = minimize(f, [2.0])
    assert r.converged and r.x_min[0] == pytest.approx(-0.5, abs=1e-5)


def test_derivatives():
    assert numerical_hessian(lambda x: x[0] ** 4, [1.0])[0, 0] == pytest.approx(12.0, rel=1e-6)
    H = numerical_hessian(lambda x: x[0] ** 2 * x[1] + np.sin(x[1]), [1.0, 0.5])
    assert_allclose(H, [[1.0, 2.0], [2.0, -np.sin(0.5)]], atol=1e-6)
    assert_allclose(H, H.T, atol=0)
    g = fd_gradient(rosenbrock, np.array([0.5, 0.5]))
    assert_allclose(g, [-51.0, 50.0], rtol=1e-6)
    J = numerical_jacobian(lambda x: np.array([x[0] * x[1], x[0] ** 3]), [2.0, 3.0])
    assert_allclose(J, [[3.0, 2.0], [12.0, 0.0]], atol=1e-6)


def test_nelder_mead_alone():
    x, f, it = nelder_mead(rosenbrock, np.array([-1.2, 1.0]), 2000, 1e-10, 1e-14)
    assert_allclose(x, [1.0, 1.0], atol=1e-4)
    assert it <= 2000
