import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from macrounc.causality import DEFAULT_PAIRS, causality_battery, granger_test
from macrounc.distributions import f_sf
from macrounc.exceptions import SizeError
from macrounc.series import Series


def _oracle(x, z, lag):
    n = x.size - lag
    own = np.column_stack([np.ones(n)] + [x[lag - j:-j] for j in range(1, lag + 1)])
    cross = np.column_stack([z[lag - j:-j] for j in range(1, lag + 1)])
    full = np.column_stack([own, cross])
    y = x[lag:]

    def rss(A):
        e = y - A @ np.linalg.lstsq(A, y, rcond=None)[0]
        return e @ e

    r0, r1 = rss(own), rss(full)
    f = (r0 - r1) / lag / (r1 / (n - 2 * lag - 1))
    coef = np.linalg.lstsq(full, y, rcond=None)[0]
    return f, f_sf(f, lag, n - 2 * lag - 1), coef[-lag:].sum()


def _pair(seed, n=300, b=0.0):
    g = np.random.default_rng(seed)
    z = g.standard_normal(n + 1)
    x = b * z[:-1] + g.standard_normal(n)
    return x, z[1:]


@pytest.mark.parametrize("lag", [1, 4, 12])
def test_granger_matches_oracle(lag):
    x, z = _pair(1, b=0.2)
    r = granger_test(x, z, lag)
    f, p, total = _oracle(x, z, lag)
    assert r.f_stat == pytest.approx(f, rel=1e-10)
    assert r.p_value == pytest.approx(p, rel=1e-9)
    assert r.coefficient_sum == pytest.approx(total, rel=1e-9)
    assert r.n_obs == x.size - lag
    f_stat, p_value, sign = r
    assert sign == ("+" if total > 0 else "-")


def test_sign_follows_the_channel():
    x, z = _pair(2, b=-0.8)
    assert granger_test(x, z, 4).sign == "-"
    assert granger_test(x, z, 4).p_value < 1e-10


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**31), st.integers(1, 8))
def test_f_is_non_negative_and_p_in_unit_interval(seed, lag):
    x, z = _pair(seed, n=120)
    r = granger_test(x, z, lag)
    assert r.f_stat >= 0 and 0 <= r.p_value <= 1
    assert r.rss_unrestricted <= r.rss_restricted


def test_series_are_aligned_by_date():
    g = np.random.default_rng(3)
    z = g.standard_normal(200)
    x = 0.9 * z[:-1] + 0.1 * g.standard_normal(199)
    caused = Series("x", "2000-02", x)
    causing = Series("z", "2000-01", z[:-1])
    assert granger_test(caused, causing, 1).p_value < 1e-20
    with pytest.raises(SizeError):
        granger_test(x, z, 1)


def test_preconditions():
    x, z = _pair(4, n=30)
    with pytest.raises(SizeError):
        granger_test(x, z, 0)
    with pytest.raises(SizeError):
        granger_test(x, z, 12)


@pytest.fixture(scope="module")
def series_set():
    g = np.random.default_rng(5)
    n = 200
    base = {k: g.standard_normal(n) for k in ("pi", "y", "h_y")}
    h_pi = np.empty(n)
    h_pi[0] = 1.0
    h_pi[1:] = 1.0 + 0.6 * base["pi"][:-1] + 0.1 * g.standard_normal(n - 1)
    base["h_pi"] = h_pi
    return {k: Series(k, "2000-01", v) for k, v in base.items()}


def test_battery_structure_and_optimal_lag(series_set):
    out = causality_battery(series_set)
    assert [(r.caused, r.causing) for r in out] == list(DEFAULT_PAIRS)
    for r in out:
        assert r.error is None
        assert [x.lag for x in r.per_lag] == [4, 8, 12]
        assert sum(x.is_optimal_lag for x in r.per_lag) == 1
        best = min(r.per_lag, key=lambda x: x.criterion_value)
        assert r.optimal_lag == best.lag
    first = out[0]
    assert first.per_lag[0].sign == "+" and first.per_lag[0].p_value < 1e-10


def test_battery_criteria_use_a_common_sample(series_set):
    out = causality_battery(series_set, lag_lengths=(1, 2), optimal_criterion="sic",
                            pairs=[("h_pi", "pi")])
    x, z = series_set["h_pi"].values, series_set["pi"].values
    crit = []
    for lag in (1, 2):
        n = x.size - 2
        y = x[2:]
        A = np.column_stack([np.ones(n)] + [x[2 - j:x.size - j] for j in range(1, lag + 1)]
                            + [z[2 - j:z.size - j] for j in range(1, lag + 1)])
        e = y - A @ np.linalg.lstsq(A, y, rcond=None)[0]
        ll = -0.5 * n * (np.log(2 * np.pi) + np.log(e @ e / n) + 1)
        crit.append(-2 * ll / n + A.shape[1] * np.log(n) / n)
    np.testing.assert_allclose([v.criterion_value for v in out[0].per_lag], crit, rtol=1e-10)


def test_battery_reports_failures_without_aborting(series_set):
    partial = {k: v for k, v in series_set.items() if k != "h_y"}
    out = causality_battery(partial)
    errors = [r for r in out if r.error]
    assert {(r.caused, r.causing) for r in errors} == {("h_y", "pi"), ("h_y", "h_pi"),
                                                        ("h_pi", "h_y"), ("y", "h_y")}
    assert all(r.per_lag == () and r.optimal_lag is None for r in errors)
    with pytest.raises(ValueError):
        causality_battery(series_set, optimal_criterion="hq")
