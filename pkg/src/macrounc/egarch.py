"""AR-X mean equations with EGARCH(1,1) log conditional variance.

The mean equation for a dependent series ``x`` is linear in its coefficients,

    x_t = c + sum_i a_i x_{t-i} + sum_i r_i z_{t-i} + sum_k e_k w_{k, t-l_k} + eps_t,

with ``z`` the other variable of the system and ``w_k`` exogenous regressors.
The conditional variance follows

    log h_t = alpha0 + alpha1 log h_{t-1} + beta |u_{t-1}| + gamma u_{t-1},
    u_t = eps_t / sqrt(h_t),

started from ``h_1 = h0``. Mean and variance parameters are estimated jointly
by Gaussian quasi-maximum likelihood.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .diagnostics import TestStat, ljung_box, significance_letter, squared_residual_q
from .distributions import normal_sf
from .exceptions import NumericalFailure, SingularityError, SizeError
from .optim import (OptimOptions, OptimResult, minimize, numerical_hessian,
                    numerical_jacobian)
from .regression import DesignMatrix, lagged, ols_fit
from .series import Series, align

try:
    from numba import njit
except ImportError:  # pragma: no cover
    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]
        return lambda f: f

logger = logging.getLogger(__name__)

__all__ = [
    "ExogTerm",
    "MeanSpec",
    "EgarchParams",
    "EquationData",
    "EgarchFit",
    "inflation_spec",
    "output_spec",
    "egarch_recursion",
    "build_equation_data",
    "negative_log_likelihood",
    "fit_equation",
    "fit_inflation_model",
    "fit_output_model",
    "extract_uncertainty",
]

LOG_H_MAX = math.log(np.finfo(float).max) - 1.0
LOG_H_MIN = -700.0
_LOG_2PI = math.log(2.0 * math.pi)
VARIANCE_LABELS = ("alpha0", "alpha1", "beta", "gamma")


@njit(cache=True, inline="always")
def _next_log_h(alpha0, alpha1, beta, gamma, log_h_prev, u_prev):
    return alpha0 + alpha1 * log_h_prev + beta * abs(u_prev) + gamma * u_prev


@njit(cache=True)
def _log_variance_path(alpha0, alpha1, beta, gamma, eps, log_h0, out):
    """Fill ``out`` with log h_t; return the first failing index or -1."""
    n = eps.shape[0]
    log_h = log_h0
    out[0] = log_h
    for t in range(1, n):
        u = eps[t - 1] / math.exp(0.5 * log_h)
        log_h = _next_log_h(alpha0, alpha1, beta, gamma, log_h, u)
        if not (LOG_H_MIN < log_h < LOG_H_MAX):
            return t
        out[t] = log_h
    return -1


@njit(cache=True)
def _gaussian_nll_terms(eps, log_h, out):
    for t in range(eps.shape[0]):
        out[t] = 0.5 * (_LOG_2PI + log_h[t] + eps[t] * eps[t] / math.exp(log_h[t]))


@njit(cache=True)
def _nll_kernel(alpha0, alpha1, beta, gamma, eps, log_h0):
    n = eps.shape[0]
    log_h = log_h0
    total = 0.5 * (_LOG_2PI + log_h + eps[0] * eps[0] / math.exp(log_h))
    for t in range(1, n):
        u = eps[t - 1] / math.exp(0.5 * log_h)
        log_h = _next_log_h(alpha0, alpha1, beta, gamma, log_h, u)
        if not (LOG_H_MIN < log_h < LOG_H_MAX):
            return math.inf
        total += 0.5 * (_LOG_2PI + log_h + eps[t] * eps[t] / math.exp(log_h))
    return total


@dataclass(frozen=True)
class ExogTerm:
    series: str
    lag: int = 1
    label: str = ""

    def __post_init__(self):
        if self.lag < 0:
            raise SizeError(f"exogenous lag must be >= 0, got {self.lag}")
        if not self.label:
            object.__setattr__(self, "label", self.series)


@dataclass(frozen=True)
class MeanSpec:
    """Which lags and regressors enter a mean equation.

    ``own_lags`` index the dependent variable's own lags, ``cross_lags`` the
    other variable's lags; ``exogenous_terms`` are ``(series, lag, label)``.
    Lag sets are explicit masks and are never pruned automatically.
    """

    own_lags: tuple[int, ...] = tuple(range(1, 13))
    cross_lags: tuple[int, ...] = (1,)
    exogenous_terms: tuple[ExogTerm, ...] = ()
    include_intercept: bool = True
    lag_limit: int = 12

    def __post_init__(self):
        own = tuple(sorted({int(v) for v in self.own_lags}))
        cross = tuple(sorted({int(v) for v in self.cross_lags}))
        terms = tuple(t if isinstance(t, ExogTerm) else ExogTerm(*t) for t in self.exogenous_terms)
        for lag in own + cross:
            if not 1 <= lag <= self.lag_limit:
                raise SizeError(f"lag {lag} outside 1..{self.lag_limit}")
        for t in terms:
            if t.lag > self.lag_limit:
                raise SizeError(f"exogenous lag {t.lag} above {self.lag_limit}")
        if not (own or cross or terms or self.include_intercept):
            raise SizeError("mean equation has no regressors")
        object.__setattr__(self, "own_lags", own)
        object.__setattr__(self, "cross_lags", cross)
        object.__setattr__(self, "exogenous_terms", terms)

    @property
    def max_lag(self) -> int:
        lags = list(self.own_lags) + list(self.cross_lags) + [t.lag for t in self.exogenous_terms]
        return max(lags, default=0)

    def labels(self, own_prefix: str = "a", cross_prefix: str = "rho") -> tuple[str, ...]:
        out = [f"{own_prefix}0"] if self.include_intercept else []
        out += [f"{own_prefix}{i}" for i in self.own_lags]
        out += [f"{cross_prefix}{i}" for i in self.cross_lags]
        out += [t.label for t in self.exogenous_terms]
        return tuple(out)


def inflation_spec(own_lags: Iterable[int] = range(1, 13), cross_lags: Iterable[int] = (1,),
                   interest_lag: int | None = 1, oil_lag: int | None = 1) -> MeanSpec:
    """Inflation equation: own lags, output-growth lags, interest-rate and oil terms."""
    terms = []
    if interest_lag is not None:
        terms.append(ExogTerm("i", interest_lag, "eta"))
    if oil_lag is not None:
        terms.append(ExogTerm("oil", oil_lag, "tau"))
    return MeanSpec(tuple(own_lags), tuple(cross_lags), tuple(terms))


def output_spec(own_lags: Iterable[int] = range(1, 13), cross_lags: Iterable[int] = (1,),
                eu_lag: int | None = 1) -> MeanSpec:
    """Output-growth equation: own lags, inflation lags and EU output growth."""
    terms = [ExogTerm("y_eu", eu_lag, "lambda")] if eu_lag is not None else []
    return MeanSpec(tuple(own_lags), tuple(cross_lags), tuple(terms))


@dataclass(frozen=True)
class EgarchParams:
    alpha0: float
    alpha1: float
    beta: float
    gamma: float

    @property
    def stationary(self) -> bool:
        return abs(self.alpha1) < 1.0

    def as_array(self) -> np.ndarray:
        return np.array([self.alpha0, self.alpha1, self.beta, self.gamma], dtype=float)

    @classmethod
    def from_array(cls, v: Sequence[float]) -> "EgarchParams":
        return cls(*(float(x) for x in v))


def egarch_recursion(params: EgarchParams, residuals: Sequence[float], h0: float) -> np.ndarray:
    """Conditional variances ``h_1..h_n`` for residuals ``eps_1..eps_n``."""
    eps = np.ascontiguousarray(np.asarray(residuals, dtype=float).ravel())
    if eps.size == 0:
        raise SizeError("residuals must be non-empty")
    if not h0 > 0:
        raise ValueError(f"h0 must be positive, got {h0}")
    out = np.empty_like(eps)
    fail = _log_variance_path(params.alpha0, params.alpha1, params.beta, params.gamma,
                              eps, math.log(h0), out)
    if fail >= 0:
        raise NumericalFailure(f"log-variance left the representable range at index {fail}")
    return np.exp(out)


@dataclass(frozen=True)
class EquationData:
    """Response and mean-equation design on the effective estimation sample."""

    name: str
    y: np.ndarray
    X: DesignMatrix
    start: np.datetime64
    spec: MeanSpec

    @property
    def n_obs(self) -> int:
        return self.y.size

    @property
    def labels(self) -> tuple[str, ...]:
        return self.X.labels

    def residuals(self, mean_coeffs: Sequence[float]) -> np.ndarray:
        return self.y - self.X.values @ np.asarray(mean_coeffs, dtype=float)


def build_equation_data(dependent: Series, spec: MeanSpec, cross: Series | None = None,
                        exogenous: Mapping[str, Series] | None = None,
                        own_prefix: str = "a", cross_prefix: str = "rho") -> EquationData:
    """Align the inputs on their common months and lay out the mean equation."""
    exogenous = dict(exogenous or {})
    needed: list[Series] = [dependent]
    if spec.cross_lags:
        if cross is None:
            raise ValueError("spec has cross lags but no cross series was given")
        needed.append(cross)
    names = []
    for term in spec.exogenous_terms:
        if term.series not in exogenous:
            raise ValueError(f"exogenous series {term.series!r} not supplied")
        if term.series not in names:
            names.append(term.series)
            needed.append(exogenous[term.series])
    aligned = align(*needed)
    dep = aligned[0].values
    cross_v = aligned[1].values if spec.cross_lags else None
    exo_v = dict(zip(names, (s.values for s in aligned[1 + bool(spec.cross_lags):])))
    L = spec.max_lag
    n = dep.size - L
    if n < 30:
        raise SizeError(f"effective sample of {n} observations after lag {L}; need >= 30")
    labels = spec.labels(own_prefix, cross_prefix)
    cols = []
    if spec.include_intercept:
        cols.append(np.ones(n))
    cols += [lagged(dep, i, L) for i in spec.own_lags]
    cols += [lagged(cross_v, i, L) for i in spec.cross_lags]
    cols += [lagged(exo_v[t.series], t.lag, L) for t in spec.exogenous_terms]
    X = DesignMatrix(labels, np.column_stack(cols))
    return EquationData(dependent.name, dep[L:].copy(), X, aligned[0].start + L, spec)


def negative_log_likelihood(mean_coeffs: Sequence[float], variance_params: EgarchParams,
                            data: EquationData, h0: float | None = None) -> float:
    """Gaussian negative log-likelihood over the effective sample.

    ``h0`` (the first conditional variance) defaults to the OLS residual
    variance of the mean equation, ``RSS / n``.
    """
    eps = data.residuals(mean_coeffs)
    if not np.all(np.isfinite(eps)):
        raise NumericalFailure("non-finite mean-equation residual")
    if h0 is None:
        h0 = _ols_variance(data)
    p = variance_params
    value = _nll_kernel(p.alpha0, p.alpha1, p.beta, p.gamma, eps, math.log(h0))
    if not math.isfinite(value):
        raise NumericalFailure("conditional variance overflowed")
    return float(value)


def _nll_contributions(theta: np.ndarray, data: EquationData, h0: float) -> np.ndarray:
    k = data.X.n_cols
    eps = data.residuals(theta[:k])
    log_h = np.empty_like(eps)
    fail = _log_variance_path(*theta[k:], eps, math.log(h0), log_h)
    if fail >= 0:
        return np.full_like(eps, np.inf)
    out = np.empty_like(eps)
    _gaussian_nll_terms(eps, log_h, out)
    return out


def _ols_variance(data: EquationData) -> float:
    fit = ols_fit(data.y, data.X)
    return fit.rss / fit.n_obs


@dataclass(frozen=True)
class EgarchFit:
    name: str
    labels: tuple[str, ...]
    mean_coefficients: np.ndarray
    mean_std_errors: np.ndarray
    variance_params: EgarchParams
    variance_std_errors: np.ndarray
    h_path: Series
    std_residuals: Series
    residuals: np.ndarray = field(repr=False)
    log_likelihood: float = float("nan")
    r_squared: float = float("nan")
    f_statistic: float = float("nan")
    diagnostics: dict[str, TestStat] = field(default_factory=dict, repr=False)
    converged: bool = False
    se_reliable: bool = True
    robust: bool = False
    h0: float = float("nan")
    homoscedastic_log_likelihood: float = float("nan")
    optim: OptimResult | None = field(default=None, repr=False)

    @property
    def n_obs(self) -> int:
        return self.residuals.size

    def _p(self, est, se):
        with np.errstate(divide="ignore", invalid="ignore"):
            z = np.abs(np.asarray(est) / np.asarray(se))
        return np.array([2.0 * normal_sf(v) if np.isfinite(v) else np.nan for v in z])

    @property
    def mean_p_values(self) -> np.ndarray:
        return self._p(self.mean_coefficients, self.mean_std_errors)

    @property
    def variance_p_values(self) -> np.ndarray:
        return self._p(self.variance_params.as_array(), self.variance_std_errors)

    def coefficient_table(self) -> list[dict]:
        """Rows of label, estimate, standard error, p-value and significance letter.

        Letters are blank for non-converged fits.
        """
        rows = []
        est = np.concatenate([self.mean_coefficients, self.variance_params.as_array()])
        se = np.concatenate([self.mean_std_errors, self.variance_std_errors])
        pv = np.concatenate([self.mean_p_values, self.variance_p_values])
        for label, b, s, p in zip(self.labels + VARIANCE_LABELS, est, se, pv):
            letter = significance_letter(p) if self.converged else ""
            rows.append(dict(label=label, estimate=float(b), std_error=float(s),
                             p_value=float(p), letter=letter))
        return rows

    def coefficient(self, label: str) -> float:
        if label in VARIANCE_LABELS:
            return float(getattr(self.variance_params, label))
        return float(self.mean_coefficients[self.labels.index(label)])

    @property
    def gamma_sign(self) -> int:
        return int(np.sign(self.variance_params.gamma))


def _to_natural(theta: np.ndarray, k: int) -> np.ndarray:
    nat = theta.copy()
    nat[k + 1] = math.tanh(theta[k + 1])
    return nat


def fit_equation(data: EquationData, options: OptimOptions | None = None, robust: bool = False,
                 q_dof_reduction: bool = False, hessian_step: float = 1e-4) -> EgarchFit:
    """Joint QMLE of an AR-X-EGARCH(1,1) equation.

    Start values: OLS mean coefficients, ``alpha0 = log(RSS/n)``,
    ``alpha1 = 0.5``, ``beta = 0.1``, ``gamma = 0``. ``alpha1`` is optimized as
    ``tanh(theta)``. Standard errors come from the inverse numerical Hessian
    of the negative log-likelihood in natural parameters, or the sandwich
    form when ``robust``; a non-positive-definite Hessian yields NaN errors and
    ``se_reliable=False``.
    """
    try:
        ols = ols_fit(data.y, data.X)
    except SingularityError as exc:
        raise SingularityError(f"{data.name}: {exc}") from exc
    if ols.rss <= 1e-24 * max(1.0, float(data.y @ data.y)):
        raise SingularityError(f"{data.name}: mean equation fits exactly; no variance to model")
    k = data.X.n_cols
    h0 = ols.rss / ols.n_obs
    log_h0 = math.log(h0)
    y, Xv = data.y, data.X.values

    def objective(theta: np.ndarray) -> float:
        eps = y - Xv @ theta[:k]
        return _nll_kernel(theta[k], math.tanh(theta[k + 1]), theta[k + 2], theta[k + 3],
                           eps, log_h0)

    homo = np.concatenate([ols.coefficients, [log_h0, 0.0, 0.0, 0.0]])
    f_homo = objective(homo)
    start = np.concatenate([ols.coefficients, [log_h0, math.atanh(0.5), 0.1, 0.0]])
    opt = minimize(objective, start, options)
    if not (opt.f_min <= f_homo):
        logger.info("%s: restarting from the homoscedastic point", data.name)
        alt = minimize(objective, homo, options)
        if alt.f_min < opt.f_min:
            opt = alt
    theta = opt.x_min
    nat = _to_natural(theta, k)
    params = EgarchParams.from_array(nat[k:])
    eps = data.residuals(nat[:k])
    h = egarch_recursion(params, eps, h0)

    def nat_objective(v: np.ndarray) -> float:
        e = y - Xv @ v[:k]
        return _nll_kernel(v[k], v[k + 1], v[k + 2], v[k + 3], e, log_h0)

    se, reliable = _standard_errors(nat_objective, nat, data, h0, robust, hessian_step)
    std = eps / np.sqrt(h)
    centered = y - y.mean()
    r2 = 1.0 - float(eps @ eps) / float(centered @ centered)
    n_slopes = k - int(data.spec.include_intercept)
    dfd = data.n_obs - k
    f_stat = (r2 / n_slopes) / ((1.0 - r2) / dfd) if n_slopes > 0 and dfd > 0 else float("nan")
    red = min(k, 11) if q_dof_reduction else 0
    diagnostics = {
        "Q12": ljung_box(std, 12, dof_reduction=red, name="Q12"),
        "Q2_1": squared_residual_q(std, 1, name="Q2_1"),
        "Q2_12": squared_residual_q(std, 12, name="Q2_12"),
    }
    months = data.start
    return EgarchFit(
        name=data.name,
        labels=data.labels,
        mean_coefficients=nat[:k].copy(),
        mean_std_errors=se[:k],
        variance_params=params,
        variance_std_errors=se[k:],
        h_path=Series(f"h_{data.name}", months, h),
        std_residuals=Series(f"z_{data.name}", months, std),
        residuals=eps,
        log_likelihood=-float(opt.f_min),
        r_squared=r2,
        f_statistic=float(f_stat),
        diagnostics=diagnostics,
        converged=opt.converged,
        se_reliable=reliable,
        robust=robust,
        h0=h0,
        homoscedastic_log_likelihood=-float(f_homo),
        optim=opt,
    )


def _standard_errors(fun, nat, data, h0, robust, step):
    nan = np.full(nat.size, np.nan)
    H = numerical_hessian(fun, nat, h=step)
    if not np.all(np.isfinite(H)):
        return nan, False
    try:
        np.linalg.cholesky(H)
    except np.linalg.LinAlgError:
        return nan, False
    Hinv = np.linalg.inv(H)
    if robust:
        J = numerical_jacobian(lambda v: _nll_contributions(v, data, h0), nat)
        cov = Hinv @ (J.T @ J) @ Hinv
    else:
        cov = Hinv
    d = np.diag(cov)
    if np.any(d <= 0):
        return nan, False
    return np.sqrt(d), True


def fit_inflation_model(pi: Series, y: Series, i: Series | None = None, oil: Series | None = None,
                        spec: MeanSpec | None = None, **kwargs) -> EgarchFit:
    """Inflation equation with interest-rate (``eta``) and oil (``tau``) terms."""
    spec = spec or inflation_spec()
    exog = {k: v for k, v in {"i": i, "oil": oil}.items() if v is not None}
    data = build_equation_data(pi.renamed("pi"), spec, y, exog, "a", "rho")
    return fit_equation(data, **kwargs)


def fit_output_model(y: Series, pi: Series, y_eu: Series | None = None,
                     spec: MeanSpec | None = None, **kwargs) -> EgarchFit:
    """Output-growth equation with the EU output term (``lambda``)."""
    spec = spec or output_spec()
    exog = {"y_eu": y_eu} if y_eu is not None else {}
    data = build_equation_data(y.renamed("y"), spec, pi, exog, "b", "delta")
    return fit_equation(data, **kwargs)


def extract_uncertainty(fit: EgarchFit, name: str | None = None,
                        allow_unconverged: bool = False) -> Series:
    """The fitted conditional-variance path as an uncertainty series."""
    if not fit.converged and not allow_unconverged:
        raise ValueError(f"fit {fit.name!r} did not converge")
    return fit.h_path.renamed(name or fit.h_path.name)
