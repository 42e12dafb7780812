"""Bivariate Granger-causality F-tests and the lag-grid battery."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .diagnostics import significance_flags, significance_letter
from .distributions import f_sf
from .exceptions import MacroUncError, SizeError
from .regression import DesignMatrix, information_criteria, lagged, ols_fit
from .series import Series, align

logger = logging.getLogger(__name__)

__all__ = [
    "DEFAULT_PAIRS",
    "GrangerResult",
    "LagResult",
    "CausalityResult",
    "granger_test",
    "causality_battery",
]

#: (caused, causing) pairs over inflation, output growth and their uncertainties.
DEFAULT_PAIRS = (
    ("h_pi", "pi"),
    ("h_y", "pi"),
    ("h_y", "h_pi"),
    ("h_pi", "y"),
    ("h_pi", "h_y"),
    ("y", "h_y"),
)


@dataclass(frozen=True)
class GrangerResult:
    f_stat: float
    p_value: float
    sign: str
    lag: int
    n_obs: int
    coefficient_sum: float
    rss_restricted: float
    rss_unrestricted: float

    def __iter__(self):
        return iter((self.f_stat, self.p_value, self.sign))


def _design(x: np.ndarray, z: np.ndarray | None, lag: int, first: int) -> DesignMatrix:
    n = x.size - first
    cols = [("const", np.ones(n))]
    cols += [(f"own{j}", lagged(x, j, first)) for j in range(1, lag + 1)]
    if z is not None:
        cols += [(f"cause{j}", lagged(z, j, first)) for j in range(1, lag + 1)]
    return DesignMatrix.from_columns(cols)


def _pair_values(caused: Series | Sequence[float], causing: Series | Sequence[float]):
    if isinstance(caused, Series) and isinstance(causing, Series):
        a, b = align(caused, causing)
        return a.values, b.values
    x = np.asarray(getattr(caused, "values", caused), dtype=float)
    z = np.asarray(getattr(causing, "values", causing), dtype=float)
    if x.size != z.size:
        raise SizeError(f"unaligned arrays of length {x.size} and {z.size}")
    return x, z


def _sign(total: float) -> str:
    return "+" if total > 0 else "-" if total < 0 else "0"


def granger_test(caused: Series | Sequence[float], causing: Series | Sequence[float],
                 lag: int) -> GrangerResult:
    """F-test that ``lag`` lags of ``causing`` add nothing to an AR(lag) of ``caused``.

    Both regressions include an intercept and use the same rows (from
    observation ``lag`` on). The sign is that of the summed causing-variable
    coefficients in the unrestricted model.
    """
    if lag < 1:
        raise SizeError(f"lag must be >= 1, got {lag}")
    x, z = _pair_values(caused, causing)
    if x.size <= 2 * lag + 10:
        raise SizeError(f"need more than {2 * lag + 10} common observations, got {x.size}")
    resp = x[lag:]
    restricted = ols_fit(resp, _design(x, None, lag, lag))
    unrestricted = ols_fit(resp, _design(x, z, lag, lag))
    n = resp.size
    dfd = n - 2 * lag - 1
    rss_r, rss_u = restricted.rss, unrestricted.rss
    f = max(0.0, (rss_r - rss_u) / lag) / (rss_u / dfd)
    total = float(np.sum(unrestricted.coefficients[1 + lag:]))
    return GrangerResult(float(f), f_sf(f, lag, dfd), _sign(total), lag, n, total, rss_r, rss_u)


@dataclass(frozen=True)
class LagResult:
    lag: int
    f_stat: float
    p_value: float
    sign: str
    is_optimal_lag: bool
    criterion_value: float

    @property
    def significant_at(self) -> dict[int, bool]:
        return significance_flags(self.p_value)

    @property
    def letter(self) -> str:
        return significance_letter(self.p_value)


@dataclass(frozen=True)
class CausalityResult:
    caused: str
    causing: str
    criterion: str
    per_lag: tuple[LagResult, ...] = ()
    error: str | None = None

    @property
    def optimal_lag(self) -> int | None:
        for r in self.per_lag:
            if r.is_optimal_lag:
                return r.lag
        return None


def _criteria(x: np.ndarray, z: np.ndarray, lags: Sequence[int], which: int) -> list[float]:
    # Unrestricted models compared on the rows allowed by the longest lag.
    first = max(lags)
    resp = x[first:]
    out = []
    for lag in lags:
        fit = ols_fit(resp, _design(x, z, lag, first))
        out.append(information_criteria(fit.log_likelihood, fit.n_params, fit.n_obs)[which])
    return out


def causality_battery(series_set: Mapping[str, Series], lag_lengths: Sequence[int] = (4, 8, 12),
                      optimal_criterion: str = "aic",
                      pairs: Sequence[tuple[str, str]] = DEFAULT_PAIRS) -> list[CausalityResult]:
    """Granger tests for every ``(caused, causing)`` pair at every lag length.

    The optimal lag per pair minimizes ``optimal_criterion`` (``"aic"`` or
    ``"sic"``) over the unrestricted models. A failing pair is reported with
    ``error`` set; the remaining pairs still run.
    """
    if optimal_criterion not in ("aic", "sic"):
        raise ValueError(f"criterion must be 'aic' or 'sic', got {optimal_criterion!r}")
    lags = sorted({int(v) for v in lag_lengths})
    if not lags:
        raise SizeError("lag grid is empty")
    which = 0 if optimal_criterion == "aic" else 1
    results = []
    for caused, causing in pairs:
        try:
            if caused not in series_set or causing not in series_set:
                missing = [s for s in (caused, causing) if s not in series_set]
                raise KeyError(f"series not available: {missing}")
            x, z = _pair_values(series_set[caused], series_set[causing])
            tests = [granger_test(x, z, lag) for lag in lags]
            ic = _criteria(x, z, lags, which)
            best = int(np.argmin(ic))
            per_lag = tuple(
                LagResult(t.lag, t.f_stat, t.p_value, t.sign, k == best, ic[k])
                for k, t in enumerate(tests)
            )
            results.append(CausalityResult(caused, causing, optimal_criterion, per_lag))
        except (MacroUncError, KeyError, ValueError, np.linalg.LinAlgError) as exc:
            logger.warning("causality %s <- %s failed: %s", caused, causing, exc)
            results.append(CausalityResult(caused, causing, optimal_criterion, (), str(exc)))
    return results
