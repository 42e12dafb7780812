"""
Does inflation Granger-cause inflation uncertainty?
===================================================

Simulate an inflation/output system, fit both EGARCH equations, extract the
conditional variances and run the bivariate causality battery.
"""

from macrounc import causality_battery, extract_uncertainty, fit_inflation_model, fit_output_model
from macrounc.egarch import EgarchParams, ExogTerm, MeanSpec, inflation_spec, output_spec
from macrounc.simulate import DgpSpec, simulate_bivariate_system

own = (1, 12)
pi_spec = DgpSpec(MeanSpec(own_lags=own, cross_lags=(), exogenous_terms=(ExogTerm("i", 1, "eta"),)),
                  {"a0": 2.0, "a1": 0.35, "a12": 0.15, "eta": -0.3},
                  EgarchParams(0.3, 0.7, 0.25, 0.3), T=600, seed=(5, 1), name="pi")
y_spec = DgpSpec(MeanSpec(own_lags=own, cross_lags=(), exogenous_terms=(ExogTerm("y_eu", 1, "lambda"),)),
                 {"a0": 2.0, "a1": 0.2, "a12": 0.35, "lambda": 0.5},
                 EgarchParams(0.8, 0.7, 0.3, 0.2), T=600, seed=(5, 2), name="y")

# Lag-1 feedback in both mean equations.
sim_pi, sim_y = simulate_bivariate_system(pi_spec, y_spec, {"rho": {1: 0.03}, "delta": {1: -0.1}})
pi, y = sim_pi.series, sim_y.series

fit_pi = fit_inflation_model(pi, y, i=sim_pi.regressors["i"],
                             spec=inflation_spec(own_lags=own, oil_lag=None))
fit_y = fit_output_model(y, pi, y_eu=sim_y.regressors["y_eu"], spec=output_spec(own_lags=own))
print("gamma (inflation) =", round(fit_pi.variance_params.gamma, 3))
print("gamma (output)    =", round(fit_y.variance_params.gamma, 3))

series = {"pi": pi, "y": y, "h_pi": extract_uncertainty(fit_pi), "h_y": extract_uncertainty(fit_y)}

# With gamma > 0 higher inflation shocks raise h_pi, so pi should lead h_pi.
for result in causality_battery(series, lag_lengths=(4, 8, 12)):
    cells = "  ".join(
        f"{x.lag:2d}: F={x.f_stat:6.2f} p={x.p_value:.3f} {x.sign}{'*' if x.is_optimal_lag else ' '}"
        for x in result.per_lag)
    print(f"{result.caused:>5s} <- {result.causing:<5s} {cells}")
