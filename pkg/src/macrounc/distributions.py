"""Regularized incomplete gamma and beta functions and the CDFs built on them.

Power series and Lentz continued fractions in double precision; absolute
error is below 1e-12 over the argument ranges used for test p-values.
"""

from __future__ import annotations

import math

from .exceptions import DomainError

__all__ = [
    "gammainc_lower",
    "gammainc_upper",
    "betainc",
    "chi_square_cdf",
    "chi_square_sf",
    "f_cdf",
    "f_sf",
    "normal_sf",
]

_EPS = 1e-16
_TINY = 1e-300
_MAX_ITER = 100_000


def _gamma_series(a: float, x: float) -> float:
    # P(a, x) by the power series; converges fast for x < a + 1
    ap = a
    term = 1.0 / a
    total = term
    for _ in range(_MAX_ITER):
        ap += 1.0
        term *= x / ap
        total += term
        if abs(term) < abs(total) * _EPS:
            break
    return total * math.exp(-x + a * math.log(x) - math.lgamma(a))


def _gamma_cfrac(a: float, x: float) -> float:
    # Q(a, x) by the Legendre continued fraction; used for x >= a + 1
    b = x + 1.0 - a
    c = 1.0 / _TINY
    d = 1.0 / b
    h = d
    for i in range(1, _MAX_ITER):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < _TINY:
            d = _TINY
        c = b + an / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            break
    return h * math.exp(-x + a * math.log(x) - math.lgamma(a))


def gammainc_lower(a: float, x: float) -> float:
    """Regularized lower incomplete gamma ``P(a, x)``."""
    if a <= 0:
        raise DomainError(f"shape must be positive, got {a}")
    if x < 0:
        raise DomainError(f"argument must be non-negative, got {x}")
    if x == 0:
        return 0.0
    if math.isinf(x):
        return 1.0
    if x < a + 1.0:
        return min(1.0, _gamma_series(a, x))
    return max(0.0, 1.0 - _gamma_cfrac(a, x))


def gammainc_upper(a: float, x: float) -> float:
    """Regularized upper incomplete gamma ``Q(a, x) = 1 - P(a, x)``."""
    if a <= 0:
        raise DomainError(f"shape must be positive, got {a}")
    if x < 0:
        raise DomainError(f"argument must be non-negative, got {x}")
    if x == 0:
        return 1.0
    if math.isinf(x):
        return 0.0
    if x < a + 1.0:
        return max(0.0, 1.0 - _gamma_series(a, x))
    return min(1.0, _gamma_cfrac(a, x))


def _beta_cfrac(a: float, b: float, x: float) -> float:
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _TINY:
        d = _TINY
    d = 1.0 / d
    h = d
    for m in range(1, _MAX_ITER):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            break
    return h


def betainc(a: float, b: float, x: float) -> float:
    """Regularized incomplete beta ``I_x(a, b)``."""
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"argument must lie in [0, 1], got {x}")
    return _betainc_pair(a, b, x, 1.0 - x)


def _betainc_pair(a: float, b: float, x: float, y: float) -> float:
    # I_x(a, b) with y = 1 - x supplied separately, so callers that know 1 - x
    # more accurately than the subtraction would give it do not lose the tail.
    if a <= 0 or b <= 0:
        raise DomainError(f"shape parameters must be positive, got {a}, {b}")
    if x <= 0.0:
        return 0.0
    if y <= 0.0:
        return 1.0
    log_front = (
        math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b)
        + a * math.log(x) + b * math.log(y)
    )
    if x < (a + 1.0) / (a + b + 2.0):
        return min(1.0, math.exp(log_front) * _beta_cfrac(a, b, x) / a)
    return max(0.0, 1.0 - math.exp(log_front) * _beta_cfrac(b, a, y) / b)


def _check_dof(*dofs):
    for d in dofs:
        if d < 1:
            raise DomainError(f"degrees of freedom must be >= 1, got {d}")


def chi_square_cdf(x: float, dof: float) -> float:
    _check_dof(dof)
    if x <= 0:
        return 0.0
    return gammainc_lower(0.5 * dof, 0.5 * x)


def chi_square_sf(x: float, dof: float) -> float:
    """Upper tail ``P(X > x)``, computed directly for accuracy in the tail."""
    _check_dof(dof)
    if x <= 0:
        return 1.0
    return gammainc_upper(0.5 * dof, 0.5 * x)


def f_cdf(x: float, d1: float, d2: float) -> float:
    _check_dof(d1, d2)
    if x <= 0:
        return 0.0
    if math.isinf(x):
        return 1.0
    denom = d1 * x + d2
    return _betainc_pair(0.5 * d1, 0.5 * d2, d1 * x / denom, d2 / denom)


def f_sf(x: float, d1: float, d2: float) -> float:
    _check_dof(d1, d2)
    if x <= 0:
        return 1.0
    if math.isinf(x):
        return 0.0
    denom = d1 * x + d2
    return _betainc_pair(0.5 * d2, 0.5 * d1, d2 / denom, d1 * x / denom)


def normal_sf(z: float) -> float:
    return 0.5 * math.erfc(z / math.sqrt(2.0))
