"""Residual diagnostics: Ljung-Box portmanteau, squared-residual Q and ARCH-LM."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .distributions import chi_square_cdf, chi_square_sf, f_cdf, f_sf
from .exceptions import SizeError
from .regression import ar_design, ols_fit

__all__ = [
    "LEVELS",
    "TestStat",
    "significance_flags",
    "significance_letter",
    "ljung_box",
    "squared_residual_q",
    "arch_lm",
    "chi_square_cdf",
    "chi_square_sf",
    "f_cdf",
    "f_sf",
]

#: Significance levels in percent, as used for the a/b/c letters.
LEVELS = (1, 5, 10)
_LETTERS = {1: "a", 5: "b", 10: "c"}


def significance_flags(p_value: float) -> dict[int, bool]:
    return {lvl: bool(p_value < lvl / 100.0) for lvl in LEVELS}


def significance_letter(p_value: float) -> str:
    """``"a"``, ``"b"`` or ``"c"`` for the 1, 5 and 10 percent levels, else ``""``."""
    if not np.isfinite(p_value):
        return ""
    for lvl in LEVELS:
        if p_value < lvl / 100.0:
            return _LETTERS[lvl]
    return ""


@dataclass(frozen=True)
class TestStat:
    """A test statistic with its reference distribution and p-value.

    ``dof`` is a 1-tuple for chi-square and a 2-tuple for F. ``degenerate``
    marks inputs (e.g. zero variance) for which the statistic is not
    informative; such results carry statistic 0 and p-value 1.
    """

    name: str
    statistic: float
    distribution: str
    dof: tuple[int, ...]
    p_value: float
    degenerate: bool = False
    significant_at: dict[int, bool] = field(init=False)

    __test__ = False

    def __post_init__(self):
        object.__setattr__(self, "significant_at", significance_flags(self.p_value))

    @property
    def letter(self) -> str:
        return significance_letter(self.p_value)


def _as_array(x: Sequence[float]) -> np.ndarray:
    return np.asarray(getattr(x, "values", x), dtype=float).ravel()


def _autocorrelations(x: np.ndarray, k: int) -> np.ndarray | None:
    d = x - x.mean()
    denom = float(d @ d)
    if denom <= 1e-300 or np.sqrt(denom / d.size) <= 1e-14 * max(1.0, np.abs(x).max()):
        return None
    return np.array([d[j:] @ d[:-j] for j in range(1, k + 1)]) / denom


def ljung_box(x: Sequence[float], k: int, dof_reduction: int = 0, name: str | None = None) -> TestStat:
    """Ljung-Box Q(k) = n(n+2) sum_j r_j^2 / (n - j), chi-square with ``k - dof_reduction`` dof."""
    x = _as_array(x)
    n = x.size
    if k < 1 or n <= k:
        raise SizeError(f"need 1 <= k < n, got k={k}, n={n}")
    if not 0 <= dof_reduction < k:
        raise SizeError(f"dof_reduction must lie in [0, k), got {dof_reduction}")
    dof = k - dof_reduction
    name = name or f"Q({k})"
    r = _autocorrelations(x, k)
    if r is None:
        return TestStat(name, 0.0, "chi_square", (dof,), 1.0, degenerate=True)
    q = float(n * (n + 2) * np.sum(r**2 / (n - np.arange(1, k + 1))))
    return TestStat(name, q, "chi_square", (dof,), chi_square_sf(q, dof))


def squared_residual_q(x: Sequence[float], k: int, name: str | None = None) -> TestStat:
    """McLeod-Li test: Ljung-Box on the squares of the mean-centered sequence."""
    x = _as_array(x)
    return ljung_box((x - x.mean()) ** 2, k, name=name or f"Q2({k})")


def arch_lm(x: Sequence[float], q: int, name: str | None = None) -> TestStat:
    """Engle's LM test: ``n R^2`` from regressing squared residuals on ``q`` own lags."""
    x = _as_array(x)
    if q < 1:
        raise SizeError(f"ARCH-LM order must be >= 1, got {q}")
    if x.size <= q + 10:
        raise SizeError(f"need more than {q + 10} observations, got {x.size}")
    e2 = (x - x.mean()) ** 2
    yy, X = ar_design(e2, range(1, q + 1), q, prefix="e2_")
    fit = ols_fit(yy, X)
    stat = max(0.0, fit.n_obs * fit.r_squared)
    return TestStat(name or f"ARCH-LM({q})", stat, "chi_square", (q,), chi_square_sf(stat, q))
