"""CSV ingestion and all-or-nothing output writing."""

from __future__ import annotations

import csv
import json
import math
import os
import shutil
import tempfile
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from ..exceptions import LoadError
from ..series import Series

__all__ = ["load_csv", "load_columns", "write_csv", "write_bundle", "to_jsonable", "dumps_json"]


def _read_rows(path: Path) -> tuple[list[str], list[list[str]]]:
    try:
        with open(path, newline="", encoding="utf-8-sig") as fh:
            rows = [r for r in csv.reader(fh)]
    except OSError as exc:
        raise LoadError(f"cannot read {path}: {exc}") from exc
    rows = [r for r in rows if any(cell.strip() for cell in r)]
    if not rows:
        raise LoadError(f"{path}: empty file")
    return [h.strip() for h in rows[0]], rows[1:]


def _parse_month(text: str, path: Path, row: int) -> np.datetime64:
    text = text.strip()
    parts = text.split("-")
    if len(parts) != 2 or len(parts[0]) != 4 or not all(p.isdigit() for p in parts) \
            or not 1 <= int(parts[1]) <= 12:
        raise LoadError(f"{path}, row {row}: date {text!r} is not YYYY-MM")
    return np.datetime64(f"{parts[0]}-{int(parts[1]):02d}", "M")


def load_columns(path, value_columns: Sequence[str], date_column: str = "date") -> dict[str, Series]:
    """Read several value columns of one CSV into monthly series.

    Dates must be ``YYYY-MM``, strictly ascending and gap-free. Errors name the
    offending row (1-based, header is row 1).
    """
    path = Path(path)
    header, rows = _read_rows(path)
    for col in [date_column, *value_columns]:
        if col not in header:
            raise LoadError(f"{path}: column {col!r} not found (have {header})")
    di = header.index(date_column)
    idx = {c: header.index(c) for c in value_columns}
    if not rows:
        raise LoadError(f"{path}: no data rows")
    dates = []
    values = {c: [] for c in value_columns}
    for r, row in enumerate(rows, start=2):
        if len(row) < len(header):
            raise LoadError(f"{path}, row {r}: expected {len(header)} fields, got {len(row)}")
        d = _parse_month(row[di], path, r)
        if dates:
            step = int((d - dates[-1]).astype(int))
            if step == 0:
                raise LoadError(f"{path}, row {r}: duplicate month {d}")
            if step < 0:
                raise LoadError(f"{path}, row {r}: month {d} out of order")
            if step > 1:
                raise LoadError(f"{path}, row {r}: gap, months {dates[-1] + 1} to {d - 1} missing")
        dates.append(d)
        for c, j in idx.items():
            cell = row[j].strip()
            try:
                v = float(cell)
            except ValueError:
                raise LoadError(f"{path}, row {r}: cannot parse {cell!r} in column {c!r}") from None
            if not math.isfinite(v):
                raise LoadError(f"{path}, row {r}: missing value in column {c!r}")
            values[c].append(v)
    return {c: Series(c, dates[0], np.array(v)) for c, v in values.items()}


def load_csv(path, date_column: str = "date", value_column: str = "value") -> Series:
    return load_columns(path, [value_column], date_column)[value_column]


def write_csv(path, series: Mapping[str, Series], date_column: str = "date"):
    """Write aligned series to a wide CSV (values in full ``repr`` precision)."""
    items = list(series.items())
    start, n = items[0][1].start, len(items[0][1])
    for name, s in items:
        if s.start != start or len(s) != n:
            raise ValueError(f"series {name!r} is not aligned with {items[0][0]!r}")
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow([date_column, *[k for k, _ in items]])
        for t in range(n):
            w.writerow([str(start + t), *[repr(float(s.values[t])) for _, s in items]])


def to_jsonable(obj):
    """Plain JSON types; numpy scalars become Python numbers, non-finite floats ``None``."""
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [to_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        return v if math.isfinite(v) else None
    if isinstance(obj, np.datetime64):
        return str(obj)
    return obj


def dumps_json(obj) -> str:
    return json.dumps(to_jsonable(obj), indent=2, allow_nan=False) + "\n"


def write_bundle(out_dir, files: Mapping[str, str]):
    """Write every file or none: stage in a temporary directory, then rename.

    Raises ``OSError`` before touching existing outputs if the directory cannot
    be created or written.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    stage = Path(tempfile.mkdtemp(prefix=".staging-", dir=out))
    try:
        for name, text in files.items():
            with open(stage / name, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
        for name in files:
            os.replace(stage / name, out / name)
    finally:
        shutil.rmtree(stage, ignore_errors=True)
