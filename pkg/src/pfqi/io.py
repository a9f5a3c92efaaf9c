"""CSV emission/ingestion and plain-text reports.

Column schemas are fixed; readers check headers before touching rows.
"""

from __future__ import annotations

import csv
import math
from datetime import datetime, timedelta, timezone
from pathlib import Path

import numpy as np

from pfqi.constants import C

SERIES_COLUMNS = ("t_utc", "t_rel_s", "r", "beta_x", "v_qi_min_over_c", "capped_flag")
SCAN_COLUMNS = ("cell", "speed_km_s", "ra_deg", "dec_deg", "alignment", "n_crossings",
                "bound_over_c", "ceiling_over_c", "error")
COUNTS_COLUMNS = ("t_bin_start_utc", "counts")


class SchemaError(ValueError):
    pass


def iso_utc(instant: datetime) -> str:
    return instant.astimezone(timezone.utc).isoformat().replace("+00:00", "Z")


def _at(start: datetime, seconds: float) -> str:
    return iso_utc(start + timedelta(seconds=float(seconds)))


def _check_header(path, header, expected):
    if tuple(header or ()) != expected:
        raise SchemaError(f"{path}: header {header} does not match {list(expected)}")


def write_series_csv(path, series, start_utc: datetime) -> Path:
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(SERIES_COLUMNS)
        for t, r, b, v, cap in zip(series.t, series.r, series.beta_x, series.v_qi_min, series.capped):
            w.writerow([_at(start_utc, t), repr(float(t)), repr(float(r)), repr(float(b)),
                        repr(float(v) / C), int(bool(cap))])
    return path


def read_series_csv(path) -> dict:
    """Columns of a series CSV as numpy arrays (t_utc kept as strings)."""
    with Path(path).open(newline="") as fh:
        rows = list(csv.reader(fh))
    _check_header(path, rows[0] if rows else None, SERIES_COLUMNS)
    body = rows[1:]
    out = {"t_utc": [row[0] for row in body]}
    for i, name in enumerate(SERIES_COLUMNS[1:5], start=1):
        out[name] = np.array([float(row[i]) for row in body])
    out["capped_flag"] = np.array([row[5] == "1" for row in body])
    return out


def _fmt(value, scale=1.0):
    if value is None:
        return ""
    return repr(float(value) / scale)


def write_scan_csv(path, rows) -> Path:
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(SCAN_COLUMNS)
        for row in rows:
            w.writerow([
                row.index,
                repr(row.speed / 1e3),
                repr(math.degrees(row.right_ascension)),
                repr(math.degrees(row.declination)),
                row.alignment or "",
                "" if row.n_crossings is None else row.n_crossings,
                _fmt(row.bound, C),
                _fmt(row.ceiling, C),
                row.error,
            ])
    return path


def read_scan_csv(path) -> list:
    with Path(path).open(newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        _check_header(path, header, SCAN_COLUMNS)
        return [dict(zip(SCAN_COLUMNS, row)) for row in reader]


def write_counts_csv(path, counts) -> Path:
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(COUNTS_COLUMNS)
        for t, n in zip(counts.t_start, counts.counts):
            w.writerow([_at(counts.start_utc, t), int(n)])
    return path


def read_counts_csv(path):
    """Returns (start_utc, t_start seconds array, counts array)."""
    with Path(path).open(newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        _check_header(path, header, COUNTS_COLUMNS)
        rows = list(reader)
    if not rows:
        raise SchemaError(f"{path}: no data rows")
    stamps = [datetime.fromisoformat(r[0].replace("Z", "+00:00")) for r in rows]
    t = np.array([(s - stamps[0]).total_seconds() for s in stamps])
    return stamps[0], t, np.array([int(r[1]) for r in rows])


def over_c(value) -> str:
    if value is None:
        return "n/a"
    if not isinstance(value, (int, float)):
        return str(value)
    return f"{value / C:.4g} c"


def write_text(path, lines) -> Path:
    path = Path(path)
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path
