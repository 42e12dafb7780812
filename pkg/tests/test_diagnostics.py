import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from macrounc.diagnostics import (TestStat, arch_lm, ljung_box, significance_flags,
                                  significance_letter, squared_residual_q)
from macrounc.exceptions import SizeError
from macrounc.simulate import make_rng, standard_normals


def _q_oracle(x, k):
    x = np.asarray(x) - np.mean(x)
    n = x.size
    c0 = x @ x
    rho = np.array([x[j:] @ x[:-j] / c0 for j in range(1, k + 1)])
    return n * (n + 2) * np.sum(rho**2 / (n - np.arange(1, k + 1)))


def test_ljung_box_matches_direct_formula(rng):
    x = rng.standard_normal(140)
    r = ljung_box(x, 12)
    assert r.statistic == pytest.approx(_q_oracle(x, 12), rel=1e-12)
    assert r.distribution == "chi_square" and r.dof == (12,)
    assert ljung_box(x, 12, dof_reduction=3).dof == (9,)
    assert ljung_box(x, 12, dof_reduction=3).p_value < r.p_value


def test_constant_input_is_degenerate():
    r = ljung_box(np.full(50, 3.0), 12)
    assert r.degenerate and r.statistic == 0 and r.p_value == 1


def test_alternating_sequence_has_constant_square():
    x = np.tile([2.0, -2.0], 40)
    r = squared_residual_q(x, 12)
    assert r.degenerate and r.statistic == 0


def test_preconditions(rng):
    with pytest.raises(SizeError):
        ljung_box(rng.standard_normal(10), 10)
    with pytest.raises(SizeError):
        ljung_box(rng.standard_normal(50), 0)
    with pytest.raises(SizeError):
        arch_lm(rng.standard_normal(50), 0)
    with pytest.raises(SizeError):
        arch_lm(rng.standard_normal(15), 5)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**31), st.floats(0.01, 100), st.floats(-1e3, 1e3))
def test_ljung_box_affine_invariance(seed, a, b):
    x = np.random.default_rng(seed).standard_normal(120)
    assert ljung_box(a * x + b, 12).statistic == pytest.approx(ljung_box(x, 12).statistic,
                                                               rel=1e-8)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**31))
def test_q_nondecreasing_in_k_and_p_values_bounded(seed):
    x = np.random.default_rng(seed).standard_normal(100)
    qs = [ljung_box(x, k) for k in range(1, 25)]
    assert np.all(np.diff([q.statistic for q in qs]) >= 0)
    for q in qs + [squared_residual_q(x, 5), arch_lm(x, 4)]:
        assert 0 <= q.p_value <= 1 and q.statistic >= 0
        assert q.significant_at == significance_flags(q.p_value)


def test_significance_helpers():
    assert significance_letter(0.004) == "a"
    assert significance_letter(0.03) == "b"
    assert significance_letter(0.07) == "c"
    assert significance_letter(0.2) == ""
    assert significance_flags(0.03) == {1: False, 5: True, 10: True}
    t = TestStat("x", 4.0, "chi_square", (2,), 0.0135)
    assert t.significant_at == {1: False, 5: True, 10: True}


def _arch1(seed, n=500, alpha=0.6):
    z = standard_normals(make_rng((77, seed)), n + 100)
    e = np.zeros_like(z)
    for t in range(1, z.size):
        e[t] = np.sqrt(1 - alpha + alpha * e[t - 1] ** 2) * z[t]
    return e[100:]


def test_arch_effects_are_detected():
    q1 = lm = 0
    for seed in range(200):
        e = _arch1(seed)
        q1 += squared_residual_q(e, 1).p_value < 0.05
        lm += arch_lm(e, 1).p_value < 0.05
    assert q1 / 200 >= 0.8 and lm / 200 >= 0.8


def test_arch_lm_statistic_is_n_r_squared(rng):
    x = rng.standard_normal(200)
    e2 = (x - x.mean()) ** 2
    y = e2[2:]
    X = np.column_stack([np.ones(198), e2[1:-1], e2[:-2]])
    resid = y - X @ np.linalg.lstsq(X, y, rcond=None)[0]
    r2 = 1 - resid @ resid / np.sum((y - y.mean()) ** 2)
    assert arch_lm(x, 2).statistic == pytest.approx(198 * r2, rel=1e-10)
