"""Monthly series container, growth-rate transforms and descriptive statistics."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .distributions import chi_square_sf
from .exceptions import DomainError, SizeError

__all__ = [
    "Series",
    "SummaryStats",
    "month",
    "align",
    "annualized_log_diff",
    "first_difference",
    "summary_stats",
]


def month(value) -> np.datetime64:
    """Coerce ``"YYYY-MM"``, a ``datetime64`` or a ``(year, month)`` pair to a month stamp."""
    if isinstance(value, tuple):
        year, mon = value
        value = f"{int(year):04d}-{int(mon):02d}"
    try:
        return np.datetime64(value, "M")
    except (TypeError, ValueError) as exc:
        raise DomainError(f"not a year-month: {value!r}") from exc


@dataclass(frozen=True)
class Series:
    """Named monthly sequence; observation ``k`` is dated ``start + k`` months.

    Values are copied into a read-only float array, so instances can be
    shared freely.
    """

    name: str
    start: np.datetime64
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        values = np.array(self.values, dtype=float).ravel()
        if values.size == 0:
            raise SizeError(f"series {self.name!r} is empty")
        bad = np.flatnonzero(~np.isfinite(values))
        if bad.size:
            raise DomainError(
                f"series {self.name!r} has a missing or non-finite value at position {bad[0]}"
            )
        values.flags.writeable = False
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "start", month(self.start))

    def __len__(self) -> int:
        return self.values.size

    @property
    def end(self) -> np.datetime64:
        return self.start + (len(self) - 1)

    @property
    def dates(self) -> np.ndarray:
        return self.start + np.arange(len(self))

    def date_of(self, k: int) -> str:
        return str(self.start + k)

    def renamed(self, name: str) -> "Series":
        return Series(name, self.start, self.values)

    def window(self, start, end) -> "Series":
        """Sub-series covering months ``start`` through ``end`` inclusive."""
        lo = int((month(start) - self.start).astype(int))
        hi = int((month(end) - self.start).astype(int))
        if lo < 0 or hi >= len(self) or hi < lo:
            raise SizeError(f"window {start}..{end} outside series {self.name!r}")
        return Series(self.name, month(start), self.values[lo : hi + 1])

    def __repr__(self) -> str:
        return f"Series({self.name!r}, {self.start}..{self.end}, n={len(self)})"


def align(*series: Series) -> list[Series]:
    """Trim every series to the months they all share."""
    if not series:
        return []
    start = max(s.start for s in series)
    end = min(s.end for s in series)
    if end < start:
        raise SizeError("series do not overlap: " + ", ".join(repr(s) for s in series))
    return [s.window(start, end) for s in series]


def annualized_log_diff(raw: Series, scale: float = 1200.0, name: str | None = None) -> Series:
    """Annualized month-on-month log growth, ``scale * log(x_t / x_{t-1})``.

    The result starts one month after ``raw``.
    """
    if scale <= 0:
        raise DomainError(f"scale must be positive, got {scale}")
    if len(raw) < 2:
        raise SizeError(f"need at least 2 observations, got {len(raw)}")
    x = raw.values
    nonpos = np.flatnonzero(x <= 0)
    if nonpos.size:
        k = int(nonpos[0])
        raise DomainError(
            f"series {raw.name!r} has non-positive value {x[k]} at {raw.date_of(k)}"
        )
    out = scale * np.diff(np.log(x))
    return Series(name or raw.name, raw.start + 1, out)


def first_difference(s: Series, name: str | None = None) -> Series:
    if len(s) < 2:
        raise SizeError(f"need at least 2 observations, got {len(s)}")
    return Series(name or s.name, s.start + 1, np.diff(s.values))


@dataclass(frozen=True)
class SummaryStats:
    mean: float
    std_dev: float
    jb_stat: float
    jb_p: float
    n: int
    skewness: float = float("nan")
    kurtosis: float = float("nan")
    degenerate: bool = False


def summary_stats(s: Series | Sequence[float]) -> SummaryStats:
    """Mean, sample standard deviation and the Jarque-Bera normality test.

    Skewness and kurtosis are the moment (biased) estimators; the standard
    deviation uses the ``n - 1`` denominator. A zero-variance sample has an
    undefined JB statistic and is returned with ``degenerate=True`` and NaNs.
    """
    x = np.asarray(s.values if isinstance(s, Series) else s, dtype=float)
    n = x.size
    if n < 4:
        raise SizeError(f"summary statistics need at least 4 observations, got {n}")
    mean = float(x.mean())
    d = x - mean
    m2 = float(np.mean(d**2))
    std = float(np.sqrt(np.sum(d**2) / (n - 1)))
    if m2 <= 1e-300 or std <= 1e-14 * max(1.0, abs(mean)):
        nan = float("nan")
        return SummaryStats(mean, std, nan, nan, n, degenerate=True)
    skew = float(np.mean(d**3)) / m2**1.5
    kurt = float(np.mean(d**4)) / m2**2
    jb = n / 6.0 * (skew**2 + (kurt - 3.0) ** 2 / 4.0)
    return SummaryStats(mean, std, jb, chi_square_sf(jb, 2), n, skew, kurt)
