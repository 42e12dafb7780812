"""End-to-end country workflow and the run report."""

from __future__ import annotations

import io
import json
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from ..causality import causality_battery
from ..diagnostics import TestStat, arch_lm, ljung_box, squared_residual_q
from ..egarch import EgarchFit, MeanSpec, extract_uncertainty, fit_inflation_model, fit_output_model
from ..egarch import ExogTerm
from ..optim import OptimOptions
from ..regression import ar_design, ols_fit, select_ar_order
from ..series import Series, SummaryStats, annualized_log_diff, first_difference, summary_stats
from ..stationarity import UnitRootResult, adf_test, pp_test
from .config import CountryConfig, RunConfig
from .io import dumps_json, load_columns, to_jsonable

logger = logging.getLogger("macrounc.pipeline")

__all__ = ["RunReport", "load_country", "process_country", "run_pipeline", "report_from_json"]

REPORT_VERSION = 1


@dataclass
class RunReport:
    """JSON-ready results of one run; tables are rendered from this form."""

    config: dict[str, Any]
    countries: list[dict[str, Any]] = field(default_factory=list)
    regime_comparison: dict[str, Any] = field(default_factory=dict)
    version: int = REPORT_VERSION

    @property
    def errors(self) -> list[dict[str, Any]]:
        return [dict(country=c["name"], **c["error"]) for c in self.countries if c.get("error")]

    def to_dict(self) -> dict[str, Any]:
        return to_jsonable(dict(version=self.version, config=self.config,
                                countries=self.countries,
                                regime_comparison=self.regime_comparison))

    def to_json(self) -> str:
        return dumps_json(self.to_dict())


def report_from_json(text: str) -> RunReport:
    d = json.loads(text)
    return RunReport(d["config"], d["countries"], d["regime_comparison"], d.get("version", 1))


# -- serialization -----------------------------------------------------------

def _stat(t: TestStat) -> dict:
    return dict(name=t.name, statistic=t.statistic, distribution=t.distribution,
                dof=list(t.dof), p_value=t.p_value, degenerate=t.degenerate,
                significant_at={str(k): v for k, v in t.significant_at.items()})


def _summary(s: SummaryStats) -> dict:
    return dict(mean=s.mean, std_dev=s.std_dev, jb_stat=s.jb_stat, jb_p=s.jb_p, n=s.n,
                skewness=s.skewness, kurtosis=s.kurtosis, degenerate=s.degenerate)


def _unit_root(r: UnitRootResult) -> dict:
    return dict(test=r.test, statistic=r.statistic, lags_or_bandwidth=r.lags_or_bandwidth,
                deterministic_spec=r.deterministic_spec, n_obs=r.n_obs,
                critical_values={str(k): v for k, v in r.critical_values.items()},
                reject_unit_root={str(k): v for k, v in r.reject_unit_root.items()})


def _fit(f: EgarchFit) -> dict:
    opt = f.optim
    return dict(
        equation=f.name,
        converged=f.converged,
        termination_reason=opt.termination_reason if opt else None,
        iterations=opt.iterations if opt else None,
        se_reliable=f.se_reliable,
        robust_se=f.robust,
        n_obs=f.n_obs,
        sample_start=str(f.h_path.start),
        sample_end=str(f.h_path.end),
        coefficients=f.coefficient_table(),
        log_likelihood=f.log_likelihood,
        homoscedastic_log_likelihood=f.homoscedastic_log_likelihood,
        r_squared=f.r_squared,
        f_statistic=f.f_statistic,
        stationary_variance=f.variance_params.stationary,
        gamma_sign=f.gamma_sign,
        h0=f.h0,
        diagnostics={k: _stat(v) for k, v in f.diagnostics.items()},
    )


def _series_dict(s: Series) -> dict:
    return dict(name=s.name, start=str(s.start), values=s.values.tolist())


# -- workflow ----------------------------------------------------------------

def load_country(cc: CountryConfig) -> dict[str, Series]:
    """Raw input series of a country, keyed by ``cpi``, ``ipi``, ``interest_rate``..."""
    by_file: dict[str, list[str]] = {}
    for key, ref in cc.columns.items():
        by_file.setdefault(ref.file, []).append(ref.column)
    loaded = {f: load_columns(f, sorted(set(cols)), cc.date_column) for f, cols in by_file.items()}
    return {key: loaded[ref.file][ref.column].renamed(key) for key, ref in cc.columns.items()}


def _transform(s: Series, how: str, scale: float, name: str) -> Series:
    if how == "level":
        return s.renamed(name)
    if how == "diff":
        return first_difference(s, name)
    return annualized_log_diff(s, scale, name)


def analysis_series(raw: dict[str, Series], cfg: RunConfig) -> dict[str, Series]:
    """Inflation, output growth and exogenous regressors after the configured transforms."""
    t = cfg.transform
    out = {
        "pi": annualized_log_diff(raw["cpi"], t.scale, "pi"),
        "y": annualized_log_diff(raw["ipi"], t.scale, "y"),
    }
    if t.extra_difference:
        out = {k: first_difference(v, k) for k, v in out.items()}
    if "interest_rate" in raw:
        out["i"] = _transform(raw["interest_rate"], t.interest_rate, t.scale, "i")
    if "oil" in raw:
        out["oil"] = _transform(raw["oil"], t.oil, t.scale, "oil")
    if "eu_ipi" in raw:
        out["y_eu"] = _transform(raw["eu_ipi"], t.eu_output, t.scale, "y_eu")
    return out


def _unit_root_block(raw: dict[str, Series], series: dict[str, Series], cfg: RunConfig) -> list:
    p = cfg.pretest
    tested = {"log_cpi": Series("log_cpi", raw["cpi"].start, np.log(raw["cpi"].values)),
              "log_ipi": Series("log_ipi", raw["ipi"].start, np.log(raw["ipi"].values))}
    tested.update(series)
    rows = []
    for name, s in tested.items():
        for form, x in (("level", s), ("first_difference", None)):
            entry = dict(series=name, form=form)
            try:
                x = x if x is not None else first_difference(s)
                max_lags = min(p.adf_max_lags, len(x) - 11)
                entry["adf"] = _unit_root(adf_test(x, p.unit_root_spec, max_lags))
                bw = None if p.pp_bandwidth < 0 else p.pp_bandwidth
                entry["pp"] = _unit_root(pp_test(x, p.unit_root_spec, bw))
            except Exception as exc:  # reported per series, run continues
                entry["error"] = f"{type(exc).__name__}: {exc}"
            rows.append(entry)
    return rows


def _ar_pretest(s: Series, cfg: RunConfig) -> dict:
    p = cfg.pretest
    order = p.ar_order
    yy, X = ar_design(s.values, range(1, order + 1), order)
    fit = ols_fit(yy, X)
    e = fit.residuals
    return dict(
        order=order,
        aic_order=select_ar_order(s, order, "aic"),
        sic_order=select_ar_order(s, order, "sic"),
        n_obs=fit.n_obs,
        Q12=_stat(ljung_box(e, p.q_lags, name="Q12")),
        Q2_1=_stat(squared_residual_q(e, 1, name="Q2_1")),
        Q2_12=_stat(squared_residual_q(e, p.q_lags, name="Q2_12")),
        ARCH_LM=_stat(arch_lm(e, p.arch_lm_lags)),
    )


def _inflation_spec(cfg: RunConfig, available: dict[str, Series]) -> MeanSpec:
    s = cfg.inflation
    terms = []
    if "i" in available and s.interest_lag is not None and s.interest_lag >= 0:
        terms.append(ExogTerm("i", s.interest_lag, "eta"))
    if "oil" in available and s.oil_lag is not None and s.oil_lag >= 0:
        terms.append(ExogTerm("oil", s.oil_lag, "tau"))
    return MeanSpec(tuple(s.own_lags), tuple(s.cross_lags), tuple(terms))


def _output_spec(cfg: RunConfig, available: dict[str, Series]) -> MeanSpec:
    s = cfg.output
    terms = []
    if "y_eu" in available and s.eu_lag is not None and s.eu_lag >= 0:
        terms.append(ExogTerm("y_eu", s.eu_lag, "lambda"))
    return MeanSpec(tuple(s.own_lags), tuple(s.cross_lags), tuple(terms))


def fit_country_equations(series: dict[str, Series], cfg: RunConfig) -> tuple[EgarchFit, EgarchFit]:
    e = cfg.estimation
    kw = dict(options=OptimOptions(gradient_tol=e.gradient_tol, max_iter=e.max_iter),
              robust=e.robust_se, q_dof_reduction=e.q_dof_reduction)
    fit_pi = fit_inflation_model(series["pi"], series["y"], series.get("i"), series.get("oil"),
                                 spec=_inflation_spec(cfg, series), **kw)
    fit_y = fit_output_model(series["y"], series["pi"], series.get("y_eu"),
                             spec=_output_spec(cfg, series), **kw)
    return fit_pi, fit_y


def causality_inputs(series: dict[str, Series], fit_pi: EgarchFit, fit_y: EgarchFit,
                     cfg: RunConfig) -> dict[str, Series]:
    h = {
        "h_pi": extract_uncertainty(fit_pi, "h_pi", allow_unconverged=True),
        "h_y": extract_uncertainty(fit_y, "h_y", allow_unconverged=True),
    }
    if cfg.causality.uncertainty_transform == "diff":
        h = {k: first_difference(v, k) for k, v in h.items()}
    return {**series, **h}


def process_country(cc: CountryConfig, cfg: RunConfig) -> dict[str, Any]:
    """Transforms, pre-tests, both EGARCH fits and the causality battery for one country."""
    raw = load_country(cc)
    series = analysis_series(raw, cfg)
    logger.info("%s: %d months of inflation, %s..%s", cc.name, len(series["pi"]),
                series["pi"].start, series["pi"].end)
    summary = {k: _summary(summary_stats(series[k])) for k in ("pi", "y")}
    unit_roots = _unit_root_block(raw, series, cfg)
    ar_tests = {k: _ar_pretest(series[k], cfg) for k in ("pi", "y")}
    fit_pi, fit_y = fit_country_equations(series, cfg)
    for f in (fit_pi, fit_y):
        logger.info("%s: %s equation %s after %d iterations (%s), log-likelihood %.4f",
                    cc.name, f.name, "converged" if f.converged else "DID NOT CONVERGE",
                    f.optim.iterations, f.optim.termination_reason, f.log_likelihood)
    pool = causality_inputs(series, fit_pi, fit_y, cfg)
    battery = causality_battery(pool, cfg.causality.lags, cfg.causality.criterion,
                                [tuple(p) for p in cfg.causality.pairs])
    causality = [
        dict(caused=r.caused, causing=r.causing, criterion=r.criterion, error=r.error,
             per_lag=[dict(lag=x.lag, f_stat=x.f_stat, p_value=x.p_value, sign=x.sign,
                           is_optimal_lag=x.is_optimal_lag, criterion_value=x.criterion_value,
                           significant_at={str(k): v for k, v in x.significant_at.items()})
                      for x in r.per_lag])
        for r in battery
    ]
    return dict(
        name=cc.name,
        regime=cc.regime,
        error=None,
        summary=summary,
        unit_roots=unit_roots,
        ar_pretest=ar_tests,
        inflation_fit=_fit(fit_pi),
        output_fit=_fit(fit_y),
        uncertainty={k: _series_dict(pool[k]) for k in ("h_pi", "h_y")},
        causality=causality,
    )


def _safe_process(args) -> tuple[dict[str, Any], str]:
    cc, cfg = args
    buf = io.StringIO()
    handler = logging.StreamHandler(buf)
    handler.setFormatter(logging.Formatter("%(levelname)s %(name)s: %(message)s"))
    root = logging.getLogger("macrounc")
    root.addHandler(handler)
    prev, propagate = root.level, root.propagate
    root.setLevel(logging.INFO)
    root.propagate = False
    try:
        result = process_country(cc, cfg)
    except Exception as exc:
        logger.error("%s failed: %s: %s", cc.name, type(exc).__name__, exc)
        result = dict(name=cc.name, regime=cc.regime,
                      error=dict(type=type(exc).__name__, message=str(exc)))
    finally:
        root.removeHandler(handler)
        root.setLevel(prev)
        root.propagate = propagate
    return result, buf.getvalue()


def _regime_comparison(countries: list[dict]) -> dict[str, Any]:
    out = {}
    for regime in sorted({c["regime"] for c in countries}):
        members = [c for c in countries if c["regime"] == regime and not c.get("error")]
        block = dict(countries=[c["name"] for c in members])
        for var in ("pi", "y"):
            means = [c["summary"][var]["mean"] for c in members]
            stds = [c["summary"][var]["std_dev"] for c in members]
            block[var] = dict(mean_of_means=float(np.mean(means)) if means else None,
                              mean_of_std_devs=float(np.mean(stds)) if stds else None)
        out[regime] = block
    return out


def run_pipeline(cfg: RunConfig, log: list[str] | None = None) -> RunReport:
    """Process every configured country; failures become per-country error records.

    With ``cfg.run.workers > 1`` countries run in separate processes; results
    are merged in configuration order, so the report does not depend on
    scheduling.
    """
    jobs = [(cc, cfg) for cc in cfg.countries]
    if cfg.run.workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=cfg.run.workers) as ex:
            outcomes = list(ex.map(_safe_process, jobs))
    else:
        outcomes = [_safe_process(j) for j in jobs]
    countries = [r for r, _ in outcomes]
    if log is not None:
        log.extend(text for _, text in outcomes)
    return RunReport(config=cfg.to_dict(), countries=countries,
                     regime_comparison=_regime_comparison(countries))
