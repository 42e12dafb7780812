"""Markdown/CSV renderings of a run report as five result tables.

Significance is marked with letters ``a``, ``b``, ``c`` for the 1, 5 and 10
percent levels. Causality cells carry the sign of the summed causing-lag
coefficients when significant, and the optimal lag is shown in bold.
"""

from __future__ import annotations

import csv
import io
from pathlib import Path
from typing import Iterable, Sequence

from ..diagnostics import significance_letter
from .io import write_bundle

__all__ = [
    "fmt_number",
    "coef_cell",
    "stat_cell",
    "causality_cell",
    "render_tables",
    "emit_tables",
]

GREEK = {"rho": "ρ", "delta": "δ", "eta": "η", "tau": "τ", "lambda": "λ",
         "alpha0": "α0", "alpha1": "α1", "beta": "β", "gamma": "γ"}
DIAG_ROWS = (("Q12", "Q12"), ("Q2_1", "Q1²"), ("Q2_12", "Q12²"))
VARIANCE = ("alpha0", "alpha1", "beta", "gamma")
EQUATIONS = {"inflation_fit": ("a", "rho"), "output_fit": ("b", "delta")}
_CAPTIONS = {"pi": "Inflation", "y": "Output growth", "h_pi": "Inflation uncertainty",
             "h_y": "Output growth uncertainty", "i": "Interest rate", "oil": "Oil price",
             "y_eu": "EU output growth"}


def fmt_number(x: float | None) -> str:
    """Compact coefficient format: three decimals, four below 0.01, scientific below 0.001."""
    if x is None:
        return ""
    a = abs(x)
    if a == 0:
        return "0"
    if a >= 0.01:
        text = f"{x:.3f}"
    elif a >= 0.001:
        text = f"{x:.4f}"
    else:
        return f"{x:.1E}"
    text = text.rstrip("0").rstrip(".")
    return "0" if text in ("-0", "") else text


def coef_cell(estimate: float | None, p_value: float | None, stars: bool = True) -> str:
    """E.g. ``"0.615 a"``; the letter is dropped when ``stars`` is false."""
    if estimate is None:
        return ""
    letter = significance_letter(p_value) if stars and p_value is not None else ""
    return fmt_number(estimate) + (f" {letter}" if letter else "")


def stat_cell(value: float | None, p_value: float | None = None, digits: int = 2) -> str:
    if value is None:
        return ""
    letter = significance_letter(p_value) if p_value is not None else ""
    return f"{value:.{digits}f}" + (f" {letter}" if letter else "")


def causality_cell(f_stat: float | None, p_value: float | None, sign: str,
                   optimal: bool) -> str:
    """E.g. ``"29.41a (+)"``, wrapped in ``**`` when it is the optimal lag."""
    if f_stat is None:
        return ""
    letter = significance_letter(p_value) if p_value is not None else ""
    text = f"{f_stat:.2f}{letter}"
    if letter:
        text += f" ({sign})"
    return f"**{text}**" if optimal else text


def _md(headers: Sequence[str], rows: Iterable[Sequence[str]]) -> str:
    rows = [list(r) for r in rows]
    out = ["| " + " | ".join(headers) + " |", "|" + "|".join(["---"] * len(headers)) + "|"]
    out += ["| " + " | ".join(r) + " |" for r in rows]
    return "\n".join(out) + "\n"


def _csv(headers: Sequence[str], rows: Iterable[Sequence[str]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(headers)
    w.writerows(rows)
    return buf.getvalue()


def _ok(countries):
    return [c for c in countries if not c.get("error")]


def _table1(report: dict) -> list[tuple[str, list[str], list[list[str]]]]:
    headers = ["Country", "Regime", "π Mean", "π Standard Deviation", "π JB Normality",
               "y Mean", "y Standard Deviation", "y JB Normality"]
    rows = []
    for c in _ok(report["countries"]):
        row = [c["name"], c["regime"]]
        for var in ("pi", "y"):
            s = c["summary"][var]
            row += [stat_cell(s["mean"]), stat_cell(s["std_dev"]),
                    stat_cell(s["jb_stat"], s["jb_p"])]
        rows.append(row)
    blocks = [("Table 1: Summary statistics", headers, rows)]
    comp_rows = []
    for regime, b in report.get("regime_comparison", {}).items():
        comp_rows.append([regime, ", ".join(b["countries"]),
                          stat_cell(b["pi"]["mean_of_means"]), stat_cell(b["pi"]["mean_of_std_devs"]),
                          stat_cell(b["y"]["mean_of_means"]), stat_cell(b["y"]["mean_of_std_devs"])])
    blocks.append(("Regime comparison (averages over countries)",
                   ["Regime", "Countries", "π Mean", "π Standard Deviation", "y Mean",
                    "y Standard Deviation"], comp_rows))
    return blocks


def _table2(report: dict):
    countries = _ok(report["countries"])
    headers = ["Equation", "Statistic"] + [c["name"] for c in countries]
    rows = []
    for var, caption in (("pi", "Inflation"), ("y", "Output")):
        for key, label in DIAG_ROWS + (("ARCH_LM", "ARCH-LM"),):
            row = [caption, label]
            for c in countries:
                t = c["ar_pretest"][var][key]
                row.append(stat_cell(t["statistic"], t["p_value"]))
            rows.append(row)
        row = [caption, "AR order (AIC/SIC)"]
        for c in countries:
            a = c["ar_pretest"][var]
            row.append(f"{a['aic_order']}/{a['sic_order']}")
        rows.append(row)
    blocks = [("Table 2: AR residual pre-tests", headers, rows)]
    ur_rows = []
    for c in countries:
        for e in c["unit_roots"]:
            if e.get("error"):
                ur_rows.append([c["name"], e["series"], e["form"], "", "", e["error"]])
                continue
            cells = []
            for test in ("adf", "pp"):
                r = e[test]
                level = next((lvl for lvl in ("1", "5", "10") if r["reject_unit_root"][lvl]), None)
                letter = {"1": "a", "5": "b", "10": "c"}.get(level, "")
                cells.append(f"{r['statistic']:.2f}" + (f" {letter}" if letter else ""))
            ur_rows.append([c["name"], e["series"], e["form"], *cells, ""])
    blocks.append(("Unit-root tests (letters: unit root rejected at 1/5/10%)",
                   ["Country", "Series", "Form", "ADF", "PP", "Note"], ur_rows))
    return blocks


def _ordered_labels(fits: list[dict], own: str, cross: str) -> list[str]:
    present = {row["label"] for f in fits for row in f["coefficients"]}

    def key(label: str):
        for rank, prefix in enumerate((own, cross)):
            tail = label[len(prefix):]
            if label.startswith(prefix) and tail.isdigit():
                return (rank, int(tail))
        order = ("eta", "tau", "lambda") + VARIANCE
        return (2, order.index(label)) if label in order else (3, 0)

    return sorted(present, key=key)


def _display_label(label: str, own: str, cross: str) -> str:
    if label in GREEK:
        return GREEK[label]
    if label.startswith(cross) and label[len(cross):].isdigit():
        return f"{GREEK[cross]}{label[len(cross):]}"
    if label == f"{own}0":
        return f"Intercept {own}0"
    return label


def _fit_table(report: dict, key: str, title: str):
    countries = _ok(report["countries"])
    own, cross = EQUATIONS[key]
    fits = [c[key] for c in countries]
    headers = [""] + [c["name"] for c in countries]
    rows = []
    for label in _ordered_labels(fits, own, cross):
        row = [_display_label(label, own, cross)]
        for f in fits:
            match = next((r for r in f["coefficients"] if r["label"] == label), None)
            row.append(coef_cell(match["estimate"], match["p_value"], f["converged"])
                       if match else "")
        rows.append(row)
    rows.append(["R²"] + [stat_cell(f["r_squared"]) for f in fits])
    rows.append(["F-Statistics"] + [stat_cell(f["f_statistic"]) for f in fits])
    rows.append(["Log Likelihood"] + [stat_cell(f["log_likelihood"]) for f in fits])
    for dkey, label in DIAG_ROWS:
        rows.append([label] + [stat_cell(f["diagnostics"][dkey]["statistic"],
                                         f["diagnostics"][dkey]["p_value"]) for f in fits])
    rows.append(["Converged"] + ["yes" if f["converged"] else "no" for f in fits])
    return [(title, headers, rows)]


def _table5(report: dict):
    countries = _ok(report["countries"])
    headers = ["Lags"] + [c["name"] for c in countries]
    title = "Table 5: Granger-causality F-tests"
    if not countries:
        return [(title, headers, [])]
    blocks = [(title, [], [])]
    for p, pair in enumerate(countries[0]["causality"]):
        caused, causing = pair["caused"], pair["causing"]
        lags = sorted({x["lag"] for c in countries for x in c["causality"][p]["per_lag"]})
        rows = []
        for lag in lags:
            row = [f"{lag} lags"]
            for c in countries:
                entry = c["causality"][p]
                x = next((v for v in entry["per_lag"] if v["lag"] == lag), None)
                row.append(causality_cell(x["f_stat"], x["p_value"], x["sign"],
                                          x["is_optimal_lag"]) if x else "")
            rows.append(row)
        title = (f"H0: {_CAPTIONS.get(causing, causing)} does not Granger-cause "
                 f"{_CAPTIONS.get(caused, caused).lower()} ({caused} <- {causing})")
        blocks.append((title, headers, rows))
    return blocks


_LETTERS = "Letters a, b, c: significant at 1%, 5%, 10%."
_NOTES = {
    1: "JB: Jarque-Bera statistic. " + _LETTERS,
    2: "Q12: Ljung-Box statistic with 12 lags on the AR residuals. Q1², Q12²: the same "
       "statistic on squared residuals (1 and 12 lags). ARCH-LM: n·R² from the regression of "
       "squared residuals on their own lags. " + _LETTERS,
    3: "Q12, Q1², Q12²: Ljung-Box statistics on standardized residuals and their squares. "
       + _LETTERS + " Fits that did not converge carry no letters.",
    5: "Cells are F-statistics. The sign in parentheses is the sign of the summed lag "
       "coefficients of the causing variable, shown when significant. " + _LETTERS
       + " Bold: lag length preferred by {crit}.",
}


def render_tables(report: dict, fmt: str = "md") -> dict[str, str]:
    """``{filename: text}`` for tables 1-5 in ``md`` or ``csv`` format."""
    crit = report.get("config", {}).get("causality", {}).get("criterion", "aic").upper()
    tables = {
        1: _table1(report),
        2: _table2(report),
        3: _fit_table(report, "inflation_fit",
                      "Table 3: Inflation equation, AR-X-EGARCH(1,1)"),
        4: _fit_table(report, "output_fit",
                      "Table 4: Output growth equation, AR-X-EGARCH(1,1)"),
        5: _table5(report),
    }
    out = {}
    for n, blocks in tables.items():
        if fmt == "md":
            parts = []
            for title, headers, rows in blocks:
                level = "#" if title.startswith("Table") else "##"
                parts.append(f"{level} {title}\n")
                if headers:
                    parts.append(_md(headers, rows))
            note = _NOTES.get(n if n != 4 else 3, "").format(crit=crit)
            parts.append(note + "\n")
            out[f"table{n}.md"] = "\n".join(parts)
        elif fmt == "csv":
            parts = []
            for title, headers, rows in blocks:
                if headers:
                    parts.append(_csv(["# " + title] + [""] * (len(headers) - 1), []))
                    parts.append(_csv(headers, rows))
            out[f"table{n}.csv"] = "".join(parts)
        else:
            raise ValueError(f"unknown table format {fmt!r}")
    return out


def emit_tables(report: dict, out_dir, formats: Sequence[str] = ("md",),
                extra_files: dict[str, str] | None = None) -> list[Path]:
    """Write rendered tables and ``results.json`` into ``out_dir`` in one atomic step."""
    from .io import dumps_json

    files: dict[str, str] = {}
    for fmt in formats:
        if fmt == "json":
            continue
        files.update(render_tables(report, fmt))
    files["results.json"] = dumps_json(report)
    files.update(extra_files or {})
    write_bundle(out_dir, files)
    return [Path(out_dir) / name for name in files]
