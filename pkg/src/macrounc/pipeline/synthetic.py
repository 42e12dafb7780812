"""Synthetic country data: a simulated inflation/output system turned back into raw indices."""

from __future__ import annotations

from pathlib import Path

import numpy as np

from ..egarch import EgarchParams, ExogTerm, MeanSpec
from ..series import Series, month
from ..simulate import DgpSpec, simulate_bivariate_system
from .io import write_csv

__all__ = ["synthetic_country", "write_synthetic_country"]

# Step sizes mapping the unit-variance auxiliary AR(1) regressors to raw units.
_RATE_STEP = 0.25
_OIL_STEP = 40.0
_EU_STEP = 6.0


def synthetic_country(seed=0, T: int = 138, start: str = "2000-01") -> dict[str, Series]:
    """Raw monthly CPI, IPI, interest rate, oil price and EU IPI, ``T + 1`` months long.

    Inflation and output growth follow AR-X-EGARCH(1,1) equations with lag-1
    feedback in both directions; the first month holds the base index levels.
    """
    first = month(start)
    pi_spec = DgpSpec(
        MeanSpec(own_lags=(1, 12), cross_lags=(),
                 exogenous_terms=(ExogTerm("i", 1, "eta"), ExogTerm("oil", 1, "tau"))),
        {"a0": 2.0, "a1": 0.35, "a12": 0.15, "eta": -0.3, "tau": -0.4},
        EgarchParams(0.3, 0.7, 0.25, 0.3), T=T, seed=(int(seed), 1), name="pi",
        start=str(first + 1))
    y_spec = DgpSpec(
        MeanSpec(own_lags=(1, 12), cross_lags=(), exogenous_terms=(ExogTerm("y_eu", 1, "lambda"),)),
        {"a0": 2.0, "a1": 0.2, "a12": 0.35, "lambda": 0.5},
        EgarchParams(0.8, 0.7, 0.3, 0.2), T=T, seed=(int(seed), 2), name="y",
        start=str(first + 1))
    sim_pi, sim_y = simulate_bivariate_system(pi_spec, y_spec,
                                              {"rho": {1: 0.03}, "delta": {1: -0.1}})

    def level(base: float, changes: np.ndarray, log: bool) -> np.ndarray:
        steps = np.concatenate([[0.0], np.cumsum(changes)])
        return base * np.exp(steps / 1200.0) if log else base + steps

    return {
        "cpi": Series("cpi", first, level(100.0, sim_pi.series.values, True)),
        "ipi": Series("ipi", first, level(100.0, sim_y.series.values, True)),
        "i": Series("i", first, level(3.0, _RATE_STEP * sim_pi.regressors["i"].values, False)),
        "oil": Series("oil", first, level(30.0, _OIL_STEP * sim_pi.regressors["oil"].values, True)),
        "eu_ipi": Series("eu_ipi", first,
                         level(100.0, _EU_STEP * sim_y.regressors["y_eu"].values + 1.5, True)),
    }


def write_synthetic_country(out_dir, name: str = "Synthetic", seed=0, T: int = 138,
                            regime: str = "currency_board") -> Path:
    """Write ``<name>.csv`` and a matching ``config.toml`` into ``out_dir``; return the config path."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    data = synthetic_country(seed, T)
    csv_name = f"{name.lower()}.csv"
    write_csv(out / csv_name, data)
    cfg = out / "config.toml"
    cfg.write_text(
        f"seed = {int(seed)}\n\n"
        "[[country]]\n"
        f'name = "{name}"\n'
        f'regime = "{regime}"\n'
        f'file = "{csv_name}"\n'
        "[country.columns]\n"
        'cpi = "cpi"\nipi = "ipi"\ninterest_rate = "i"\noil = "oil"\neu_ipi = "eu_ipi"\n',
        encoding="utf-8",
    )
    return cfg
