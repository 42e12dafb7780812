"""Seeded data-generating processes for AR-X-EGARCH(1,1) equations.

Random numbers come from numpy's PCG64 seeded through ``SeedSequence``.
Standard normals are produced by the inverse-CDF method from uniforms
``(k + 0.5) / 2**53`` with ``k`` a 53-bit integer draw, which keeps every
draw strictly inside (0, 1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np
from scipy.special import ndtri

from .egarch import LOG_H_MAX, LOG_H_MIN, EgarchParams, MeanSpec, _next_log_h, njit
from .exceptions import NumericalFailure, SizeError
from .series import Series, month

__all__ = [
    "DgpSpec",
    "SimulatedPath",
    "make_rng",
    "standard_normals",
    "simulate_ar_egarch",
    "simulate_bivariate_system",
]

SQRT_2_OVER_PI = math.sqrt(2.0 / math.pi)


def make_rng(seed) -> np.random.Generator:
    """PCG64 generator; ``seed`` may be an int or a tuple such as ``(base, replication)``."""
    if isinstance(seed, np.random.SeedSequence):
        return np.random.Generator(np.random.PCG64(seed))
    entropy = list(seed) if isinstance(seed, (tuple, list)) else int(seed)
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(entropy)))


def standard_normals(rng: np.random.Generator, n: int) -> np.ndarray:
    k = rng.integers(0, 2**53, size=n, dtype=np.int64)
    return ndtri((k + 0.5) / 2.0**53)


@dataclass(frozen=True)
class DgpSpec:
    """True parameters of one equation.

    ``coefficients`` is keyed by the labels of ``mean_spec.labels(own_prefix,
    cross_prefix)``; missing labels are zero. Regressors that feed cross lags
    (key ``"cross"``) or exogenous terms are Gaussian AR(1) series with
    autoregressive coefficient ``aux_ar`` unless given in ``regressors`` with
    length ``burn_in + T``.
    """

    mean_spec: MeanSpec
    coefficients: Mapping[str, float]
    variance_params: EgarchParams
    T: int = 500
    burn_in: int = 200
    seed: int | tuple[int, ...] = 0
    own_prefix: str = "a"
    cross_prefix: str = "rho"
    name: str = "x"
    start: str = "2000-01"
    aux_ar: float = 0.5
    regressors: Mapping[str, Sequence[float]] = field(default_factory=dict)

    def __post_init__(self):
        if self.T < 50:
            raise SizeError(f"T must be >= 50, got {self.T}")
        if self.burn_in < 0:
            raise SizeError(f"burn_in must be >= 0, got {self.burn_in}")
        unknown = set(self.coefficients) - set(self.labels)
        if unknown:
            raise ValueError(f"coefficients for labels not in the mean spec: {sorted(unknown)}")

    @property
    def labels(self) -> tuple[str, ...]:
        return self.mean_spec.labels(self.own_prefix, self.cross_prefix)

    def coef(self, label: str) -> float:
        return float(self.coefficients.get(label, 0.0))


@dataclass(frozen=True)
class SimulatedPath:
    series: Series
    h: np.ndarray = field(repr=False)
    residuals: np.ndarray = field(repr=False)
    z: np.ndarray = field(repr=False)
    regressors: dict[str, Series] = field(default_factory=dict, repr=False)


@njit(cache=True)
def _simulate_system(c, own_idx, own_coef, cross_idx, cross_coef, other, params, z,
                     log_h_init, x, log_h, eps):
    # One equation advanced over t = 0..N-1; ``other`` supplies cross-lag values.
    n = z.shape[0]
    a0, a1, b, g = params[0], params[1], params[2], params[3]
    for t in range(n):
        if t == 0:
            lh = log_h_init
        else:
            u = eps[t - 1] / math.exp(0.5 * log_h[t - 1])
            lh = _next_log_h(a0, a1, b, g, log_h[t - 1], u)
        if not (LOG_H_MIN < lh < LOG_H_MAX):
            return t
        log_h[t] = lh
        eps[t] = math.exp(0.5 * lh) * z[t]
        v = c[t]
        for j in range(own_idx.shape[0]):
            if t - own_idx[j] >= 0:
                v += own_coef[j] * x[t - own_idx[j]]
        for j in range(cross_idx.shape[0]):
            if t - cross_idx[j] >= 0:
                v += cross_coef[j] * other[t - cross_idx[j]]
        x[t] = v + eps[t]
    return -1


@njit(cache=True)
def _simulate_pair(c1, o1, a1c, k1, r1, p1, z1, lh01, c2, o2, a2c, k2, r2, p2, z2, lh02,
                   x1, lh1, e1, x2, lh2, e2):
    n = z1.shape[0]
    for t in range(n):
        for q in range(2):
            if q == 0:
                c, oi, oc, ci, cc, p, z, lh0, x, lh, e, other = (
                    c1, o1, a1c, k1, r1, p1, z1, lh01, x1, lh1, e1, x2)
            else:
                c, oi, oc, ci, cc, p, z, lh0, x, lh, e, other = (
                    c2, o2, a2c, k2, r2, p2, z2, lh02, x2, lh2, e2, x1)
            if t == 0:
                h_log = lh0
            else:
                u = e[t - 1] / math.exp(0.5 * lh[t - 1])
                h_log = _next_log_h(p[0], p[1], p[2], p[3], lh[t - 1], u)
            if not (LOG_H_MIN < h_log < LOG_H_MAX):
                return t
            lh[t] = h_log
            e[t] = math.exp(0.5 * h_log) * z[t]
            v = c[t]
            for j in range(oi.shape[0]):
                if t - oi[j] >= 0:
                    v += oc[j] * x[t - oi[j]]
            for j in range(ci.shape[0]):
                if t - ci[j] >= 0:
                    v += cc[j] * other[t - ci[j]]
            x[t] = v + e[t]
    return -1


def _initial_log_h(p: EgarchParams) -> float:
    if abs(p.alpha1) < 1.0:
        return (p.alpha0 + p.beta * SQRT_2_OVER_PI) / (1.0 - p.alpha1)
    return p.alpha0


def _ar1(rng: np.random.Generator, n: int, phi: float) -> np.ndarray:
    e = standard_normals(rng, n)
    out = np.empty(n)
    prev = 0.0
    for t in range(n):
        prev = phi * prev + e[t]
        out[t] = prev
    return out


def _prepare(spec: DgpSpec):
    """Shocks, auxiliary regressors and the exogenous part of the mean."""
    N = spec.burn_in + spec.T
    root = np.random.SeedSequence(list(spec.seed) if isinstance(spec.seed, (tuple, list))
                                  else int(spec.seed))
    shock_seq, aux_seq = root.spawn(2)
    z = standard_normals(make_rng(shock_seq), N)
    ms = spec.mean_spec
    names = (["cross"] if ms.cross_lags else []) + sorted({t.series for t in ms.exogenous_terms})
    aux_rngs = dict(zip(names, (make_rng(s) for s in aux_seq.spawn(len(names)))))
    regs = {}
    for name in names:
        if name in spec.regressors:
            v = np.asarray(spec.regressors[name], dtype=float)
            if v.size != N:
                raise SizeError(f"regressor {name!r} needs {N} values, got {v.size}")
            regs[name] = v
        else:
            regs[name] = _ar1(aux_rngs[name], N, spec.aux_ar)
    c = np.full(N, spec.coef(f"{spec.own_prefix}0") if ms.include_intercept else 0.0)
    for i in ms.cross_lags:
        coef = spec.coef(f"{spec.cross_prefix}{i}")
        c[i:] += coef * regs["cross"][:-i]
    for term in ms.exogenous_terms:
        w = regs[term.series]
        coef = spec.coef(term.label)
        if term.lag == 0:
            c += coef * w
        else:
            c[term.lag:] += coef * w[:-term.lag]
    own_idx = np.array(ms.own_lags, dtype=np.int64)
    own_coef = np.array([spec.coef(f"{spec.own_prefix}{i}") for i in ms.own_lags], dtype=float)
    return N, z, regs, c, own_idx, own_coef


def _package(spec: DgpSpec, x, log_h, eps, z, regs) -> SimulatedPath:
    b = spec.burn_in
    start = month(spec.start)
    return SimulatedPath(
        series=Series(spec.name, start, x[b:]),
        h=np.exp(log_h[b:]),
        residuals=eps[b:].copy(),
        z=z[b:].copy(),
        regressors={k: Series(k, start, v[b:]) for k, v in regs.items()},
    )


def simulate_ar_egarch(spec: DgpSpec) -> SimulatedPath:
    """Simulate one AR-X-EGARCH(1,1) equation; deterministic in ``spec.seed``."""
    N, z, regs, c, own_idx, own_coef = _prepare(spec)
    x = np.zeros(N)
    log_h = np.zeros(N)
    eps = np.zeros(N)
    empty_i = np.zeros(0, dtype=np.int64)
    fail = _simulate_system(c, own_idx, own_coef, empty_i, np.zeros(0), np.zeros(N),
                            spec.variance_params.as_array(), z,
                            _initial_log_h(spec.variance_params), x, log_h, eps)
    if fail >= 0:
        raise NumericalFailure(f"conditional variance overflowed at simulation step {fail}")
    return _package(spec, x, log_h, eps, z, regs)


def simulate_bivariate_system(spec_pi: DgpSpec, spec_y: DgpSpec,
                              cross_coefficients: Mapping[str, Mapping[int, float]] | None = None
                              ) -> tuple[SimulatedPath, SimulatedPath]:
    """Advance two equations on a shared clock with feedback through lags.

    ``cross_coefficients = {"rho": {lag: value}, "delta": {lag: value}}``
    adds ``rho * y_{t-lag}`` to the first equation and ``delta * pi_{t-lag}``
    to the second. With no cross terms each path equals
    :func:`simulate_ar_egarch` run on its own spec.
    """
    for s in (spec_pi, spec_y):
        if s.mean_spec.cross_lags:
            raise ValueError("cross terms of a bivariate system go in cross_coefficients")
    if spec_pi.burn_in + spec_pi.T != spec_y.burn_in + spec_y.T or spec_pi.burn_in != spec_y.burn_in:
        raise SizeError("both equations need the same T and burn_in")
    cc = cross_coefficients or {}
    rho = dict(cc.get("rho", {}))
    delta = dict(cc.get("delta", {}))
    N, z1, regs1, c1, o1, a1 = _prepare(spec_pi)
    _, z2, regs2, c2, o2, a2 = _prepare(spec_y)
    k1 = np.array(sorted(rho), dtype=np.int64)
    r1 = np.array([rho[i] for i in sorted(rho)], dtype=float)
    k2 = np.array(sorted(delta), dtype=np.int64)
    r2 = np.array([delta[i] for i in sorted(delta)], dtype=float)
    if np.any(k1 < 1) or np.any(k2 < 1):
        raise SizeError("cross lags must be >= 1")
    arrays = [np.zeros(N) for _ in range(6)]
    fail = _simulate_pair(c1, o1, a1, k1, r1, spec_pi.variance_params.as_array(), z1,
                          _initial_log_h(spec_pi.variance_params),
                          c2, o2, a2, k2, r2, spec_y.variance_params.as_array(), z2,
                          _initial_log_h(spec_y.variance_params), *arrays)
    if fail >= 0:
        raise NumericalFailure(f"conditional variance overflowed at simulation step {fail}")
    x1, lh1, e1, x2, lh2, e2 = arrays
    return (_package(spec_pi, x1, lh1, e1, z1, regs1),
            _package(spec_y, x2, lh2, e2, z2, regs2))
