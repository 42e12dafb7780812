"""Least squares, information criteria and autoregressive order selection."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy.linalg import solve_triangular

from .exceptions import SingularityError, SizeError
from .series import Series

__all__ = [
    "DesignMatrix",
    "OlsFit",
    "ols_fit",
    "information_criteria",
    "lagged",
    "ar_design",
    "select_ar_order",
]


@dataclass(frozen=True)
class DesignMatrix:
    """Regressor columns with labels; rows align with a response vector."""

    labels: tuple[str, ...]
    values: np.ndarray

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if values.ndim == 1:
            values = values[:, None]
        if values.ndim != 2 or values.shape[1] != len(self.labels):
            raise SizeError(f"{len(self.labels)} labels for array of shape {values.shape}")
        values.flags.writeable = False
        object.__setattr__(self, "labels", tuple(self.labels))
        object.__setattr__(self, "values", values)

    @classmethod
    def from_columns(cls, columns: Iterable[tuple[str, Sequence[float]]]) -> "DesignMatrix":
        columns = list(columns)
        if not columns:
            raise SizeError("design matrix needs at least one column")
        lengths = {len(v) for _, v in columns}
        if len(lengths) != 1:
            raise SizeError(f"columns have unequal lengths {sorted(lengths)}")
        labels = [lab for lab, _ in columns]
        return cls(tuple(labels), np.column_stack([np.asarray(v, float) for _, v in columns]))

    @property
    def n_rows(self) -> int:
        return self.values.shape[0]

    @property
    def n_cols(self) -> int:
        return self.values.shape[1]

    def with_column(self, label: str, values: Sequence[float]) -> "DesignMatrix":
        return DesignMatrix(self.labels + (label,), np.column_stack([self.values, values]))


@dataclass(frozen=True)
class OlsFit:
    labels: tuple[str, ...]
    coefficients: np.ndarray
    std_errors: np.ndarray
    residuals: np.ndarray
    fitted: np.ndarray
    rss: float
    r_squared: float
    log_likelihood: float
    n_obs: int
    n_params: int

    @property
    def sigma2(self) -> float:
        """Residual variance with the ``n - k`` denominator."""
        return self.rss / (self.n_obs - self.n_params)

    @property
    def t_values(self) -> np.ndarray:
        return self.coefficients / self.std_errors

    def coef(self, label: str) -> float:
        return float(self.coefficients[self.labels.index(label)])


def ols_fit(y: Sequence[float], X: DesignMatrix | np.ndarray, rank_tol: float = 1e-10) -> OlsFit:
    """Least squares through a thin QR factorization of ``X``.

    A plain array is accepted and its columns are labelled ``x0, x1, ...``.
    Raises :class:`SingularityError` naming the first column that is (numerically)
    a linear combination of the columns before it.
    """
    y = np.asarray(y, dtype=float)
    if not isinstance(X, DesignMatrix):
        arr = np.asarray(X, dtype=float)
        arr = arr[:, None] if arr.ndim == 1 else arr
        X = DesignMatrix(tuple(f"x{j}" for j in range(arr.shape[1])), arr)
    A = X.values
    n, k = A.shape
    if y.shape != (n,):
        raise SizeError(f"response has shape {y.shape}, design has {n} rows")
    if n <= k:
        raise SizeError(f"need more rows than columns, got {n} x {k}")
    norms = np.linalg.norm(A, axis=0)
    for j in np.flatnonzero(norms == 0):
        raise SingularityError(f"column {X.labels[j]!r} is identically zero")
    # Column scaling keeps the rank test meaningful for badly scaled regressors.
    Q, R = np.linalg.qr(A / norms)
    diag = np.abs(np.diag(R))
    for j in range(k):
        if diag[j] < rank_tol:
            raise SingularityError(
                f"column {X.labels[j]!r} is collinear with the preceding regressors"
            )
    beta = solve_triangular(R, Q.T @ y) / norms
    fitted = A @ beta
    resid = y - fitted
    rss = float(resid @ resid)
    s2 = rss / (n - k)
    Rinv = solve_triangular(R, np.eye(k))
    cov = s2 * (Rinv @ Rinv.T) / np.outer(norms, norms)
    se = np.sqrt(np.diag(cov))
    centered = y - y.mean()
    tss = float(centered @ centered)
    r2 = 1.0 - rss / tss if tss > 0 else 0.0
    ll = -0.5 * n * (np.log(2 * np.pi) + np.log(rss / n) + 1.0) if rss > 0 else np.inf
    return OlsFit(X.labels, beta, se, resid, fitted, rss, r2, float(ll), n, k)


def information_criteria(log_likelihood: float, n_params: int, n_obs: int) -> tuple[float, float]:
    """Per-observation Akaike and Schwarz criteria ``(aic, sic)``."""
    if n_obs <= 0:
        raise SizeError(f"n_obs must be positive, got {n_obs}")
    base = -2.0 * log_likelihood / n_obs
    return base + 2.0 * n_params / n_obs, base + n_params * np.log(n_obs) / n_obs


def lagged(x: np.ndarray, lag: int, first: int) -> np.ndarray:
    """``x[t - lag]`` for ``t = first, ..., len(x) - 1``."""
    if lag > first:
        raise SizeError(f"lag {lag} reaches before the start of the sample (first row {first})")
    return np.asarray(x, float)[first - lag : len(x) - lag]


def ar_design(x: np.ndarray, lags: Iterable[int], first: int, intercept: bool = True,
              prefix: str = "ar") -> tuple[np.ndarray, DesignMatrix]:
    """Response ``x[first:]`` and a design of its own lags (plus intercept)."""
    x = np.asarray(x, float)
    cols = []
    if intercept:
        cols.append(("const", np.ones(len(x) - first)))
    cols += [(f"{prefix}{lag}", lagged(x, lag, first)) for lag in lags]
    return x[first:], DesignMatrix.from_columns(cols)


def select_ar_order(s: Series | Sequence[float], p_max: int, criterion: str = "aic") -> int:
    """AR order in ``1..p_max`` minimizing AIC or SIC on a common sample.

    Every candidate drops the first ``p_max`` observations so the criteria are
    comparable; ties go to the smaller order.
    """
    x = np.asarray(s.values if isinstance(s, Series) else s, dtype=float)
    if criterion not in ("aic", "sic"):
        raise ValueError(f"criterion must be 'aic' or 'sic', got {criterion!r}")
    if p_max < 1:
        raise SizeError(f"p_max must be >= 1, got {p_max}")
    if len(x) < p_max + 20:
        raise SizeError(f"need at least {p_max + 20} observations, got {len(x)}")
    which = 0 if criterion == "aic" else 1
    best_p, best = 1, np.inf
    for p in range(1, p_max + 1):
        yy, X = ar_design(x, range(1, p + 1), p_max)
        fit = ols_fit(yy, X)
        ic = information_criteria(fit.log_likelihood, fit.n_params, fit.n_obs)[which]
        if ic < best:
            best_p, best = p, ic
    return best_p
