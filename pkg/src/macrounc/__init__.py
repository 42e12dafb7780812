"""Inflation and output-growth uncertainty: AR-X-EGARCH(1,1) estimation, unit-root
and residual pre-tests, and Granger-causality batteries for monthly macro data."""

from .causality import CausalityResult, causality_battery, granger_test
from .diagnostics import TestStat, arch_lm, chi_square_cdf, f_cdf, ljung_box, squared_residual_q
from .egarch import (EgarchFit, EgarchParams, ExogTerm, MeanSpec, build_equation_data,
                     egarch_recursion, extract_uncertainty, fit_equation, fit_inflation_model,
                     fit_output_model, inflation_spec, negative_log_likelihood, output_spec)
from .optim import OptimOptions, OptimResult, minimize, numerical_hessian
from .regression import DesignMatrix, OlsFit, information_criteria, ols_fit, select_ar_order
from .series import Series, SummaryStats, align, annualized_log_diff, first_difference, summary_stats
from .simulate import DgpSpec, SimulatedPath, simulate_ar_egarch, simulate_bivariate_system
from .stationarity import UnitRootResult, adf_test, pp_test

__all__ = [
    "CausalityResult",
    "causality_battery",
    "granger_test",
    "TestStat",
    "arch_lm",
    "chi_square_cdf",
    "f_cdf",
    "ljung_box",
    "squared_residual_q",
    "EgarchFit",
    "EgarchParams",
    "ExogTerm",
    "MeanSpec",
    "build_equation_data",
    "egarch_recursion",
    "extract_uncertainty",
    "fit_equation",
    "fit_inflation_model",
    "fit_output_model",
    "inflation_spec",
    "negative_log_likelihood",
    "output_spec",
    "OptimOptions",
    "OptimResult",
    "minimize",
    "numerical_hessian",
    "DesignMatrix",
    "OlsFit",
    "information_criteria",
    "ols_fit",
    "select_ar_order",
    "Series",
    "SummaryStats",
    "align",
    "annualized_log_diff",
    "first_difference",
    "summary_stats",
    "DgpSpec",
    "SimulatedPath",
    "simulate_ar_egarch",
    "simulate_bivariate_system",
    "UnitRootResult",
    "adf_test",
    "pp_test",
]

__version__ = "0.1.0"
