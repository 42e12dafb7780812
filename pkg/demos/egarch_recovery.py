"""
Fitting an AR(1)-EGARCH(1,1) model to simulated data
=====================================================

Simulate a long path with known parameters, estimate the model by Gaussian
quasi-maximum likelihood and compare estimates with the truth.
"""

import numpy as np

from macrounc import (DgpSpec, EgarchParams, MeanSpec, build_equation_data, fit_equation,
                      simulate_ar_egarch)

# An AR(1) mean with an intercept and no cross or exogenous terms.
spec = MeanSpec(own_lags=(1,), cross_lags=())
truth = EgarchParams(alpha0=-0.5, alpha1=0.8, beta=0.3, gamma=0.4)

path = simulate_ar_egarch(DgpSpec(spec, {"a0": 0.0, "a1": 0.4}, truth, T=3000, seed=7))
print(path.series)

# Mean coefficients start from OLS, the variance from the homoscedastic point.
fit = fit_equation(build_equation_data(path.series, spec))
print(f"converged: {fit.converged} ({fit.optim.termination_reason}), "
      f"log-likelihood {fit.log_likelihood:.2f}")

for row in fit.coefficient_table():
    true = {"a0": 0.0, "a1": 0.4, **dict(zip(("alpha0", "alpha1", "beta", "gamma"),
                                             truth.as_array()))}[row["label"]]
    print(f"{row['label']:>7s} {row['estimate']:8.4f} ({row['std_error']:.4f}) "
          f"{row['letter']:1s}  true {true:6.3f}")

# gamma > 0: a positive shock raises next month's variance more than a negative one.
h = fit.h_path.values
print("mean conditional variance", np.round(h.mean(), 3))

# Residual checks on the standardized residuals.
for name, stat in fit.diagnostics.items():
    print(f"{name:>6s} {stat.statistic:7.2f}  p={stat.p_value:.3f}")
