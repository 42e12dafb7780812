"""Run configuration: a TOML file describing countries, inputs and options.

Every option has a default; a minimal file only lists ``[[country]]`` blocks.

.. code-block:: toml

    [run]
    workers = 1                  # >1 processes countries in parallel
    formats = ["md"]             # any of md, csv (results.json is always written)

    [transform]
    scale = 1200.0               # annualization of monthly log differences
    extra_difference = false     # difference inflation and output growth once more
    interest_rate = "diff"       # level | diff | log_diff
    oil = "log_diff"
    eu_output = "log_diff"

    [pretest]
    ar_order = 12                # AR order of the residual pre-tests
    unit_root_spec = "constant"  # none | constant | constant+trend
    adf_max_lags = 12
    pp_bandwidth = -1            # -1: Newey-West automatic
    q_lags = 12
    arch_lm_lags = 12

    [inflation]                  # lag masks of the inflation mean equation
    own_lags = [1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12]
    cross_lags = [1]
    interest_lag = 1
    oil_lag = 1

    [output]
    own_lags = [1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12]
    cross_lags = [1]
    eu_lag = 1

    [estimation]
    robust_se = false
    q_dof_reduction = false
    max_iter = 500
    gradient_tol = 1e-6

    [causality]
    lags = [4, 8, 12]
    criterion = "aic"            # aic | sic
    uncertainty_transform = "level"   # level | diff
    pairs = [["h_pi", "pi"], ["h_y", "pi"], ["h_y", "h_pi"],
             ["h_pi", "y"], ["h_pi", "h_y"], ["y", "h_y"]]

    [[country]]
    name = "Country A"
    regime = "currency_board"    # or inflation_targeting
    file = "country_a.csv"       # default file for the columns below
    [country.columns]
    cpi = "cpi"
    ipi = "ipi"
    interest_rate = "i"
    oil = "oil"
    eu_ipi = { file = "eu.csv", column = "ipi" }

Relative paths are resolved against the directory of the configuration file.
``interest_rate``, ``oil`` and ``eu_ipi`` are optional; a missing column
drops the corresponding term from its equation.
"""

from __future__ import annotations

import sys
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Any

from ..causality import DEFAULT_PAIRS
from ..exceptions import LoadError
from .io import _read_rows

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

__all__ = [
    "RunConfig",
    "CountryConfig",
    "ColumnRef",
    "load_config",
    "config_from_dict",
    "REGIMES",
    "SERIES_KEYS",
]

REGIMES = ("currency_board", "inflation_targeting")
SERIES_KEYS = ("cpi", "ipi", "interest_rate", "oil", "eu_ipi")
_REQUIRED = ("cpi", "ipi")
_TRANSFORMS = ("level", "diff", "log_diff")
FULL_LAGS = list(range(1, 13))


@dataclass(frozen=True)
class ColumnRef:
    file: str
    column: str


@dataclass
class CountryConfig:
    name: str
    regime: str
    columns: dict[str, ColumnRef]
    date_column: str = "date"


@dataclass
class RunSection:
    workers: int = 1
    formats: list[str] = field(default_factory=lambda: ["md"])


@dataclass
class TransformSection:
    scale: float = 1200.0
    extra_difference: bool = False
    interest_rate: str = "diff"
    oil: str = "log_diff"
    eu_output: str = "log_diff"


@dataclass
class PretestSection:
    ar_order: int = 12
    unit_root_spec: str = "constant"
    adf_max_lags: int = 12
    pp_bandwidth: int = -1
    q_lags: int = 12
    arch_lm_lags: int = 12


@dataclass
class InflationSection:
    own_lags: list[int] = field(default_factory=lambda: list(FULL_LAGS))
    cross_lags: list[int] = field(default_factory=lambda: [1])
    interest_lag: int = 1
    oil_lag: int = 1


@dataclass
class OutputSection:
    own_lags: list[int] = field(default_factory=lambda: list(FULL_LAGS))
    cross_lags: list[int] = field(default_factory=lambda: [1])
    eu_lag: int = 1


@dataclass
class EstimationSection:
    robust_se: bool = False
    q_dof_reduction: bool = False
    max_iter: int = 500
    gradient_tol: float = 1e-6


@dataclass
class CausalitySection:
    lags: list[int] = field(default_factory=lambda: [4, 8, 12])
    criterion: str = "aic"
    uncertainty_transform: str = "level"
    pairs: list[list[str]] = field(default_factory=lambda: [list(p) for p in DEFAULT_PAIRS])


@dataclass
class RunConfig:
    countries: list[CountryConfig] = field(default_factory=list)
    run: RunSection = field(default_factory=RunSection)
    transform: TransformSection = field(default_factory=TransformSection)
    pretest: PretestSection = field(default_factory=PretestSection)
    inflation: InflationSection = field(default_factory=InflationSection)
    output: OutputSection = field(default_factory=OutputSection)
    estimation: EstimationSection = field(default_factory=EstimationSection)
    causality: CausalitySection = field(default_factory=CausalitySection)
    seed: int = 0
    base_dir: str = "."

    def to_dict(self) -> dict[str, Any]:
        d = asdict(self)
        d.pop("base_dir")
        return d


def _section(cls, raw: dict | None, where: str):
    raw = dict(raw or {})
    known = {f.name for f in fields(cls)}
    unknown = set(raw) - known
    if unknown:
        raise LoadError(f"[{where}]: unknown option(s) {sorted(unknown)}")
    return cls(**raw)


def _country(raw: dict, base: Path, check_files: bool) -> CountryConfig:
    try:
        name = raw["name"]
    except KeyError:
        raise LoadError("[[country]] entry without a name") from None
    regime = raw.get("regime", "")
    if regime not in REGIMES:
        raise LoadError(f"country {name!r}: regime must be one of {REGIMES}, got {regime!r}")
    default_file = raw.get("file")
    cols_raw = raw.get("columns", {})
    unknown = set(cols_raw) - set(SERIES_KEYS)
    if unknown:
        raise LoadError(f"country {name!r}: unknown series {sorted(unknown)}")
    columns = {}
    for key, ref in cols_raw.items():
        if isinstance(ref, str):
            if default_file is None:
                raise LoadError(f"country {name!r}: {key} names a column but no file is set")
            ref = ColumnRef(default_file, ref)
        elif isinstance(ref, dict):
            ref = ColumnRef(ref.get("file", default_file), ref["column"])
        else:
            raise LoadError(f"country {name!r}: bad column reference for {key}")
        path = Path(ref.file)
        if not path.is_absolute():
            path = base / path
        columns[key] = ColumnRef(str(path), ref.column)
    for key in _REQUIRED:
        if key not in columns:
            raise LoadError(f"country {name!r}: required series {key!r} missing")
    cc = CountryConfig(name, regime, columns, raw.get("date_column", "date"))
    if check_files:
        for key, ref in columns.items():
            header, _ = _read_rows(Path(ref.file))
            for col in (cc.date_column, ref.column):
                if col not in header:
                    raise LoadError(f"country {name!r}: column {col!r} not in {ref.file}")
    return cc


def config_from_dict(raw: dict, base_dir: str | Path = ".", check_files: bool = True) -> RunConfig:
    raw = dict(raw)
    base = Path(base_dir)
    known = {"country", "run", "transform", "pretest", "inflation", "output", "estimation",
             "causality", "seed"}
    unknown = set(raw) - known
    if unknown:
        raise LoadError(f"unknown top-level key(s) {sorted(unknown)}")
    cfg = RunConfig(
        countries=[_country(c, base, check_files) for c in raw.get("country", [])],
        run=_section(RunSection, raw.get("run"), "run"),
        transform=_section(TransformSection, raw.get("transform"), "transform"),
        pretest=_section(PretestSection, raw.get("pretest"), "pretest"),
        inflation=_section(InflationSection, raw.get("inflation"), "inflation"),
        output=_section(OutputSection, raw.get("output"), "output"),
        estimation=_section(EstimationSection, raw.get("estimation"), "estimation"),
        causality=_section(CausalitySection, raw.get("causality"), "causality"),
        seed=int(raw.get("seed", 0)),
        base_dir=str(base),
    )
    _validate(cfg)
    return cfg


def _validate(cfg: RunConfig):
    names = [c.name for c in cfg.countries]
    if len(set(names)) != len(names):
        raise LoadError(f"duplicate country names in {names}")
    t = cfg.transform
    if t.scale <= 0:
        raise LoadError("transform.scale must be positive")
    for key in ("interest_rate", "oil", "eu_output"):
        if getattr(t, key) not in _TRANSFORMS:
            raise LoadError(f"transform.{key} must be one of {_TRANSFORMS}")
    if not cfg.causality.lags:
        raise LoadError("causality.lags must be non-empty")
    if cfg.causality.criterion not in ("aic", "sic"):
        raise LoadError("causality.criterion must be 'aic' or 'sic'")
    if cfg.causality.uncertainty_transform not in ("level", "diff"):
        raise LoadError("causality.uncertainty_transform must be 'level' or 'diff'")
    allowed = {"pi", "y", "h_pi", "h_y", "i", "oil", "y_eu"}
    for pair in cfg.causality.pairs:
        if len(pair) != 2 or not set(pair) <= allowed:
            raise LoadError(f"causality pair {pair} must name two of {sorted(allowed)}")
    for fmt in cfg.run.formats:
        if fmt not in ("md", "csv", "json"):
            raise LoadError(f"unknown output format {fmt!r}")
    if cfg.pretest.unit_root_spec not in ("none", "constant", "constant+trend"):
        raise LoadError("pretest.unit_root_spec must be none, constant or constant+trend")


def load_config(path, check_files: bool = True) -> RunConfig:
    path = Path(path)
    try:
        with open(path, "rb") as fh:
            raw = tomllib.load(fh)
    except OSError as exc:
        raise LoadError(f"cannot read config {path}: {exc}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise LoadError(f"{path}: invalid TOML: {exc}") from exc
    return config_from_dict(raw, path.parent, check_files)
