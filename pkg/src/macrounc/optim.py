"""Unconstrained minimization: Nelder-Mead polish followed by BFGS refinement.

Gradients are central finite differences with step
``h_i = max(1e-7, 1e-7 * |x_i|)``. Non-finite objective values are treated
as a signal to back off (shrink the simplex or the line-search step); a
region that stays non-finite ends the run with ``numerical_failure``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

__all__ = [
    "OptimOptions",
    "OptimResult",
    "fd_gradient",
    "minimize",
    "nelder_mead",
    "numerical_hessian",
    "numerical_jacobian",
]

Objective = Callable[[np.ndarray], float]
TERMINATION_REASONS = ("gradient_tol", "step_tol", "max_iter", "numerical_failure")


@dataclass(frozen=True)
class OptimOptions:
    gradient_tol: float = 1e-6
    step_tol: float = 1e-10
    f_tol: float = 1e-12
    max_iter: int = 500
    simplex: bool = True
    simplex_max_iter: int | None = None  # default 200 * dim
    simplex_x_tol: float = 1e-6
    simplex_f_tol: float = 1e-9
    max_backtracks: int = 60


@dataclass(frozen=True)
class OptimResult:
    x_min: np.ndarray
    f_min: float
    iterations: int
    converged: bool
    termination_reason: str
    f_evals: int = 0
    gradient: np.ndarray | None = field(default=None, repr=False)
    simplex_iterations: int = 0


class _Counted:
    def __init__(self, fun: Objective):
        self.fun = fun
        self.n = 0

    def __call__(self, x: np.ndarray) -> float:
        self.n += 1
        try:
            v = float(self.fun(x))
        except (FloatingPointError, OverflowError, ArithmeticError):
            return np.inf
        return v if np.isfinite(v) else np.inf


def _fd_steps(x: np.ndarray) -> np.ndarray:
    return np.maximum(1e-7, 1e-7 * np.abs(x))


def fd_gradient(f: Objective, x: np.ndarray) -> np.ndarray:
    """Central-difference gradient."""
    x = np.asarray(x, dtype=float)
    h = _fd_steps(x)
    g = np.empty_like(x)
    for i in range(x.size):
        xp = x.copy()
        xm = x.copy()
        xp[i] += h[i]
        xm[i] -= h[i]
        g[i] = (f(xp) - f(xm)) / (xp[i] - xm[i])
    return g


def nelder_mead(f: Objective, x0: np.ndarray, max_iter: int, x_tol: float, f_tol: float
                ) -> tuple[np.ndarray, float, int]:
    """Standard Nelder-Mead (reflect 1, expand 2, contract 1/2, shrink 1/2)."""
    n = x0.size
    simplex = np.empty((n + 1, n))
    simplex[0] = x0
    for i in range(n):
        v = x0.copy()
        v[i] = v[i] * 1.05 if v[i] != 0 else 0.00025
        simplex[i + 1] = v
    fvals = np.array([f(v) for v in simplex])
    it = 0
    while it < max_iter:
        order = np.argsort(fvals, kind="stable")
        simplex, fvals = simplex[order], fvals[order]
        if (np.max(np.abs(simplex[1:] - simplex[0])) <= x_tol
                and np.max(np.abs(fvals[1:] - fvals[0])) <= f_tol * (1.0 + abs(fvals[0]))):
            break
        it += 1
        centroid = simplex[:-1].mean(axis=0)
        xr = centroid + (centroid - simplex[-1])
        fr = f(xr)
        if fr < fvals[0]:
            xe = centroid + 2.0 * (centroid - simplex[-1])
            fe = f(xe)
            if fe < fr:
                simplex[-1], fvals[-1] = xe, fe
            else:
                simplex[-1], fvals[-1] = xr, fr
            continue
        if fr < fvals[-2]:
            simplex[-1], fvals[-1] = xr, fr
            continue
        if fr < fvals[-1]:
            xc = centroid + 0.5 * (xr - centroid)
            fc = f(xc)
            if fc <= fr:
                simplex[-1], fvals[-1] = xc, fc
                continue
        else:
            xc = centroid + 0.5 * (simplex[-1] - centroid)
            fc = f(xc)
            if fc < fvals[-1]:
                simplex[-1], fvals[-1] = xc, fc
                continue
        simplex[1:] = simplex[0] + 0.5 * (simplex[1:] - simplex[0])
        fvals[1:] = [f(v) for v in simplex[1:]]
    best = int(np.argmin(fvals))
    return simplex[best].copy(), float(fvals[best]), it


def minimize(objective: Objective, x0, options: OptimOptions | None = None) -> OptimResult:
    """Minimize ``objective`` from ``x0``.

    A Nelder-Mead stage (skipped with ``options.simplex=False``) moves the
    start into the basin, then BFGS with finite-difference gradients and a
    backtracking Armijo line search sharpens the optimum. Converged means
    termination by the gradient or the step tolerance.
    """
    opts = options or OptimOptions()
    f = _Counted(objective)
    x = np.array(x0, dtype=float).ravel()
    fx = f(x)
    if not np.isfinite(fx):
        return OptimResult(x, np.inf, 0, False, "numerical_failure", f.n)
    simplex_its = 0
    if opts.simplex and x.size > 0:
        budget = opts.simplex_max_iter or 200 * x.size
        xs, fs, simplex_its = nelder_mead(f, x, budget, opts.simplex_x_tol, opts.simplex_f_tol)
        if fs <= fx:
            x, fx = xs, fs

    n = x.size
    H = np.eye(n)
    g = fd_gradient(f, x)
    if not np.all(np.isfinite(g)):
        return OptimResult(x, fx, 0, False, "numerical_failure", f.n, g, simplex_its)
    reason = "max_iter"
    it = 0
    first = True
    while it < opts.max_iter:
        if np.max(np.abs(g), initial=0.0) <= opts.gradient_tol:
            reason = "gradient_tol"
            break
        it += 1
        p = -H @ g
        slope = float(g @ p)
        if slope >= 0 or not np.isfinite(slope):
            H = np.eye(n)
            p = -g
            slope = float(g @ p)
        alpha = 1.0
        accepted = False
        saw_finite = False
        for _ in range(opts.max_backtracks):
            x_new = x + alpha * p
            f_new = f(x_new)
            if np.isfinite(f_new):
                saw_finite = True
                if f_new <= fx + 1e-4 * alpha * slope:
                    accepted = True
                    break
            alpha *= 0.5
        if not accepted:
            reason = "step_tol" if saw_finite else "numerical_failure"
            break
        g_new = fd_gradient(f, x_new)
        if not np.all(np.isfinite(g_new)):
            reason = "numerical_failure"
            x, fx = x_new, f_new
            break
        s = x_new - x
        yv = g_new - g
        df = fx - f_new
        x, fx, g = x_new, f_new, g_new
        sy = float(s @ yv)
        if sy > 1e-12 * np.linalg.norm(s) * np.linalg.norm(yv):
            if first:
                H = np.eye(n) * (sy / float(yv @ yv))
                first = False
            rho = 1.0 / sy
            V = np.eye(n) - rho * np.outer(s, yv)
            H = V @ H @ V.T + rho * np.outer(s, s)
        if (np.max(np.abs(s)) <= opts.step_tol * (1.0 + np.max(np.abs(x)))
                and df <= opts.f_tol * (1.0 + abs(fx))):
            reason = "step_tol"
            break
    else:
        reason = "max_iter" if np.max(np.abs(g), initial=0.0) > opts.gradient_tol else "gradient_tol"
    converged = reason in ("gradient_tol", "step_tol")
    return OptimResult(x, fx, it, converged, reason, f.n, g, simplex_its)


def numerical_hessian(objective: Objective, x, h: float = 1e-4) -> np.ndarray:
    """Central-difference Hessian with steps ``h * max(1, |x_i|)``, symmetrized."""
    x = np.asarray(x, dtype=float).ravel()
    n = x.size
    steps = h * np.maximum(1.0, np.abs(x))
    f0 = float(objective(x))
    H = np.empty((n, n))
    for i in range(n):
        ei = np.zeros(n)
        ei[i] = steps[i]
        fp = float(objective(x + ei))
        fm = float(objective(x - ei))
        H[i, i] = (fp - 2.0 * f0 + fm) / steps[i] ** 2
        for j in range(i + 1, n):
            ej = np.zeros(n)
            ej[j] = steps[j]
            fpp = float(objective(x + ei + ej))
            fpm = float(objective(x + ei - ej))
            fmp = float(objective(x - ei + ej))
            fmm = float(objective(x - ei - ej))
            H[i, j] = H[j, i] = (fpp - fpm - fmp + fmm) / (4.0 * steps[i] * steps[j])
    return 0.5 * (H + H.T)


def numerical_jacobian(fun: Callable[[np.ndarray], np.ndarray], x, h: float = 1e-5) -> np.ndarray:
    """Central-difference Jacobian of a vector-valued function (rows: outputs)."""
    x = np.asarray(x, dtype=float).ravel()
    steps = h * np.maximum(1.0, np.abs(x))
    cols = []
    for i in range(x.size):
        e = np.zeros(x.size)
        e[i] = steps[i]
        cols.append((np.asarray(fun(x + e)) - np.asarray(fun(x - e))) / (2.0 * steps[i]))
    return np.column_stack(cols)
