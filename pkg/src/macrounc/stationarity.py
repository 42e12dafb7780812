"""Augmented Dickey-Fuller and Phillips-Perron unit-root tests.

Both are left-tailed t-type tests of a unit root in the level coefficient of

    dy_t = [c] + [d t] + phi * y_{t-1} + (lagged dy terms) + u_t

and share one table of Dickey-Fuller critical values.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .exceptions import SingularityError, SizeError
from .regression import DesignMatrix, information_criteria, ols_fit
from .series import Series

__all__ = [
    "DETERMINISTIC_SPECS",
    "UnitRootResult",
    "critical_values",
    "adf_test",
    "pp_test",
    "newey_west_bandwidth",
]

DETERMINISTIC_SPECS = ("none", "constant", "constant+trend")

# Dickey-Fuller t-statistic quantiles (Fuller 1976, Table 8.5.2) by sample size.
_CV_SIZES = np.array([25, 50, 100, 250, 500, np.inf])
_CV_TABLE = {
    "none": {
        1: [-2.66, -2.62, -2.60, -2.58, -2.58, -2.58],
        5: [-1.95, -1.95, -1.95, -1.95, -1.95, -1.95],
        10: [-1.60, -1.61, -1.61, -1.62, -1.62, -1.62],
    },
    "constant": {
        1: [-3.75, -3.58, -3.51, -3.46, -3.44, -3.43],
        5: [-3.00, -2.93, -2.89, -2.88, -2.87, -2.86],
        10: [-2.63, -2.60, -2.58, -2.57, -2.57, -2.57],
    },
    "constant+trend": {
        1: [-4.38, -4.15, -4.04, -3.99, -3.98, -3.96],
        5: [-3.60, -3.50, -3.45, -3.43, -3.42, -3.41],
        10: [-3.24, -3.18, -3.15, -3.13, -3.13, -3.12],
    },
}


def critical_values(spec: str, n_obs: int) -> dict[int, float]:
    """Critical values at 1/5/10 percent, linearly interpolated in ``1/n``."""
    _check_spec(spec)
    inv = 1.0 / _CV_SIZES[::-1]
    x = 1.0 / max(n_obs, 25)
    return {
        lvl: float(np.interp(x, inv, np.asarray(vals)[::-1]))
        for lvl, vals in _CV_TABLE[spec].items()
    }


def _check_spec(spec: str):
    if spec not in DETERMINISTIC_SPECS:
        raise ValueError(f"deterministic spec must be one of {DETERMINISTIC_SPECS}, got {spec!r}")


@dataclass(frozen=True)
class UnitRootResult:
    test: str
    statistic: float
    lags_or_bandwidth: int
    deterministic_spec: str
    critical_values: dict[int, float]
    n_obs: int

    @property
    def reject_unit_root(self) -> dict[int, bool]:
        return {lvl: bool(self.statistic < cv) for lvl, cv in self.critical_values.items()}


def _values(s) -> np.ndarray:
    return np.asarray(s.values if isinstance(s, Series) else s, dtype=float).ravel()


def _df_design(y: np.ndarray, spec: str, n_lags: int, first: int) -> tuple[np.ndarray, DesignMatrix]:
    # Rows are dy[first:], i.e. y-indices first+1 .. T-1.
    dy = np.diff(y)
    m = dy.size - first
    cols = []
    if spec != "none":
        cols.append(("const", np.ones(m)))
    if spec == "constant+trend":
        cols.append(("trend", np.arange(first + 1, first + 1 + m, dtype=float)))
    cols.append(("y_lag", y[first : first + m]))
    for j in range(1, n_lags + 1):
        cols.append((f"dy_lag{j}", dy[first - j : first - j + m]))
    return dy[first:], DesignMatrix.from_columns(cols)


def _df_regression(y, spec, n_lags, first):
    resp, X = _df_design(y, spec, n_lags, first)
    fit = ols_fit(resp, X)
    j = X.labels.index("y_lag")
    return fit, j


def _guard_degenerate(y: np.ndarray):
    if np.ptp(y) <= 1e-14 * max(1.0, np.abs(y).max()):
        raise SingularityError("series has zero variance; unit-root regression is singular")


def adf_test(s: Series | Sequence[float], spec: str = "constant", max_lags: int | None = None,
             fixed_lags: int | None = None) -> UnitRootResult:
    """Augmented Dickey-Fuller test with AIC lag selection over ``0..max_lags``.

    Candidate orders are compared on a common sample; the chosen order is then
    re-estimated on the longest sample it allows. ``max_lags`` defaults to
    ``floor(12 (T/100)^{1/4})``. Pass ``fixed_lags`` to skip selection.
    """
    _check_spec(spec)
    y = _values(s)
    T = y.size
    if max_lags is None:
        max_lags = int(np.floor(12.0 * (T / 100.0) ** 0.25))
        max_lags = min(max_lags, max(0, T - 10 - 1))
    if max_lags < 0:
        raise SizeError(f"max_lags must be >= 0, got {max_lags}")
    if T < max_lags + 10:
        raise SizeError(f"need at least {max_lags + 10} observations, got {T}")
    _guard_degenerate(y)
    if fixed_lags is not None:
        best = fixed_lags
    else:
        best, best_ic = 0, np.inf
        for p in range(max_lags + 1):
            fit, _ = _df_regression(y, spec, p, max_lags)
            aic = information_criteria(fit.log_likelihood, fit.n_params, fit.n_obs)[0]
            if aic < best_ic:
                best, best_ic = p, aic
    fit, j = _df_regression(y, spec, best, best)
    if fit.n_obs - fit.n_params < 1:
        raise SizeError("effective sample too small after lagging")
    stat = float(fit.coefficients[j] / fit.std_errors[j])
    return UnitRootResult("ADF", stat, best, spec, critical_values(spec, fit.n_obs), fit.n_obs)


def newey_west_bandwidth(n_obs: int) -> int:
    return int(np.floor(4.0 * (n_obs / 100.0) ** (2.0 / 9.0)))


def pp_test(s: Series | Sequence[float], spec: str = "constant",
            bandwidth: int | None = None) -> UnitRootResult:
    """Phillips-Perron Z_t with a Bartlett-kernel long-run variance.

    With ``bandwidth=0`` the correction vanishes and the statistic is the
    Dickey-Fuller t-ratio of the regression without lagged differences.
    """
    _check_spec(spec)
    y = _values(s)
    T = y.size
    if T < 20:
        raise SizeError(f"need at least 20 observations, got {T}")
    if bandwidth is None:
        bandwidth = newey_west_bandwidth(T)
    if bandwidth < 0:
        raise SizeError(f"bandwidth must be >= 0, got {bandwidth}")
    _guard_degenerate(y)
    fit, j = _df_regression(y, spec, 0, 0)
    u = fit.residuals
    n = u.size
    gamma0 = float(u @ u) / n
    lrv = gamma0
    for lag in range(1, min(bandwidth, n - 1) + 1):
        w = 1.0 - lag / (bandwidth + 1.0)
        lrv += 2.0 * w * float(u[lag:] @ u[:-lag]) / n
    t_phi = fit.coefficients[j] / fit.std_errors[j]
    s = np.sqrt(fit.sigma2)
    se = fit.std_errors[j]
    lam = np.sqrt(lrv)
    stat = np.sqrt(gamma0 / lrv) * t_phi - 0.5 * (lrv - gamma0) / lam * (n * se / s)
    return UnitRootResult("PP", float(stat), bandwidth, spec, critical_values(spec, n), n)
