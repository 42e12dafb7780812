"""Command-line entry point: ``macrounc {run,fit,test,simulate,report}``.

Exit status is 0 on full success; otherwise 1 (or 2 for usage and input
errors) with a JSON error summary on stderr.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .causality import granger_test
from .diagnostics import arch_lm, ljung_box, squared_residual_q
from .exceptions import MacroUncError
from .series import summary_stats
from .stationarity import adf_test, pp_test

def _fail(errors: list[dict], code: int = 1) -> int:
    sys.stderr.write(json.dumps({"status": "error", "errors": errors}, indent=2) + "\n")
    return code


def _formats(args) -> list[str]:
    return args.format or ["md"]


def cmd_run(args) -> int:
    from .pipeline.config import load_config
    from .pipeline.run import run_pipeline
    from .pipeline.tables import emit_tables

    cfg = load_config(args.config)
    if args.seed is not None:
        cfg.seed = args.seed
    out = Path(args.out or "results")
    log: list[str] = []
    report = run_pipeline(cfg, log)
    if args.verbose:
        sys.stderr.write("".join(log))
    formats = args.format or cfg.run.formats
    emit_tables(report.to_dict(), out, formats, extra_files={"run.log": "".join(log)})
    if report.errors:
        return _fail(report.errors)
    print(json.dumps({"status": "ok", "out": str(out), "countries": len(report.countries)}))
    return 0


def _country_series(args):
    from .pipeline.config import load_config
    from .pipeline.run import analysis_series, load_country

    cfg = load_config(args.config)
    matches = [c for c in cfg.countries if c.name == args.country]
    if not matches:
        raise MacroUncError(f"country {args.country!r} not in {args.config}")
    return cfg, analysis_series(load_country(matches[0]), cfg)


def cmd_fit(args) -> int:
    from .pipeline.run import _fit, fit_country_equations
    from .pipeline.io import dumps_json
    from .pipeline.tables import _csv, _fit_table, _md

    cfg, series = _country_series(args)
    fit_pi, fit_y = fit_country_equations(series, cfg)
    fit = fit_pi if args.equation == "inflation" else fit_y
    record = _fit(fit)
    fmt = _formats(args)[0]
    if fmt == "json":
        text = dumps_json(record)
    else:
        key = "inflation_fit" if args.equation == "inflation" else "output_fit"
        report = {"countries": [{"name": args.country, "error": None, key: record}]}
        n = 3 if args.equation == "inflation" else 4
        (title, headers, rows), = _fit_table(report, key, f"Table {n}: {args.equation} equation")
        text = _md(headers, rows) if fmt == "md" else _csv(headers, rows)
    _emit(text, args.out)
    return 0 if fit.converged else _fail([{"country": args.country, "type": "NotConverged",
                                           "message": fit.optim.termination_reason}])


def _emit(text: str, out):
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def cmd_test(args) -> int:
    from .pipeline.io import dumps_json
    from .pipeline.run import _stat, _unit_root, causality_inputs, fit_country_equations

    cfg, series = _country_series(args)
    needs_h = args.kind == "granger" and {args.series, args.causing} & {"h_pi", "h_y"}
    needs_h = needs_h or args.series in ("h_pi", "h_y")
    if needs_h:
        series = causality_inputs(series, *fit_country_equations(series, cfg), cfg)
    if args.series not in series:
        raise MacroUncError(f"series {args.series!r} not available (have {sorted(series)})")
    x = series[args.series]
    k = args.lag
    if args.kind == "adf":
        record = _unit_root(adf_test(x, args.spec, k if k is not None else cfg.pretest.adf_max_lags))
    elif args.kind == "pp":
        record = _unit_root(pp_test(x, args.spec, k))
    elif args.kind == "ljung_box":
        record = _stat(ljung_box(x, k or 12))
    elif args.kind == "squared_q":
        record = _stat(squared_residual_q(x, k or 12))
    elif args.kind == "arch_lm":
        record = _stat(arch_lm(x, k or 12))
    elif args.kind == "jb":
        s = summary_stats(x)
        record = dict(mean=s.mean, std_dev=s.std_dev, jb_stat=s.jb_stat, jb_p=s.jb_p)
    else:
        if not args.causing or args.causing not in series:
            raise MacroUncError("granger needs --causing naming an available series")
        g = granger_test(x, series[args.causing], k or 4)
        record = dict(caused=args.series, causing=args.causing, lag=g.lag, f_stat=g.f_stat,
                      p_value=g.p_value, sign=g.sign, n_obs=g.n_obs)
    _emit(dumps_json(record), args.out)
    return 0


def cmd_simulate(args) -> int:
    from .pipeline.synthetic import write_synthetic_country

    out = Path(args.out or "synthetic")
    cfg = write_synthetic_country(out, args.name, args.seed or 0, args.T, args.regime)
    print(json.dumps({"status": "ok", "config": str(cfg)}))
    return 0


def cmd_report(args) -> int:
    from .pipeline.run import report_from_json
    from .pipeline.tables import emit_tables

    src = Path(args.results)
    report = report_from_json(src.read_text(encoding="utf-8"))
    out = Path(args.out) if args.out else src.parent
    emit_tables(report.to_dict(), out, _formats(args))
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="macrounc", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, config=True):
        if config:
            sp.add_argument("--config", required=True, help="TOML run configuration")
        sp.add_argument("--out", help="output directory (or file for fit/test)")
        sp.add_argument("--seed", type=int, help="random seed")
        sp.add_argument("--format", action="append", choices=["md", "json", "csv"],
                        help="output format; repeatable")
        sp.add_argument("-v", "--verbose", action="store_true")

    sp = sub.add_parser("run", help="full pipeline for every configured country")
    common(sp)
    sp.set_defaults(func=cmd_run)

    sp = sub.add_parser("fit", help="estimate one equation for one country")
    common(sp)
    sp.add_argument("--country", required=True)
    sp.add_argument("--equation", choices=["inflation", "output"], default="inflation")
    sp.set_defaults(func=cmd_fit)

    sp = sub.add_parser("test", help="one diagnostic or causality test")
    common(sp)
    sp.add_argument("--country", required=True)
    sp.add_argument("--kind", required=True,
                    choices=["adf", "pp", "ljung_box", "squared_q", "arch_lm", "jb", "granger"])
    sp.add_argument("--series", default="pi")
    sp.add_argument("--causing")
    sp.add_argument("--lag", type=int, help="lag order, bandwidth or max lags")
    sp.add_argument("--spec", default="constant", choices=["none", "constant", "constant+trend"])
    sp.set_defaults(func=cmd_test)

    sp = sub.add_parser("simulate", help="write a synthetic country (CSV + config)")
    common(sp, config=False)
    sp.add_argument("--T", type=int, default=138, help="number of growth-rate observations")
    sp.add_argument("--name", default="Synthetic")
    sp.add_argument("--regime", default="currency_board",
                    choices=["currency_board", "inflation_targeting"])
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("report", help="re-render tables from results.json")
    common(sp, config=False)
    sp.add_argument("--results", required=True, help="path to results.json")
    sp.set_defaults(func=cmd_report)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (MacroUncError, OSError, KeyError, ValueError) as exc:
        return _fail([{"type": type(exc).__name__, "message": str(exc)}], code=2)


if __name__ == "__main__":
    sys.exit(main())
