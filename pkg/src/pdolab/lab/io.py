"""CSV and JSON output.

GridFunction CSV schema: header ``index,re,im``; one row per grid point in
row-major order, ``index`` running ``0 .. N^n - 1`` without gaps.  The grid
is recovered from the row count and the caller's ``dim`` and ``length``.

Report CSVs: a header row, ``\\n`` line endings, floats written with 17
significant digits so they round-trip exactly.  The rows file and the
summary file form the deterministic payload; provenance (including the
wall-clock timestamp) goes to a separate JSON file.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import math
from pathlib import Path

import numpy as np

from ..grid import Grid, GridFunction
from .experiments import ExperimentReport


def format_value(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v)).lower()
    if isinstance(v, (float, np.floating)):
        return "%.17g" % float(v)
    return str(v)


def _write_rows(fh, header, rows):
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_value(row.get(c, "")) for c in header])


def grid_function_to_csv(u: GridFunction) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["index", "re", "im"])
    for i, z in enumerate(u.flat):
        writer.writerow([i, format_value(z.real), format_value(z.imag)])
    return buf.getvalue()


def write_grid_function(u: GridFunction, path) -> None:
    Path(path).write_text(grid_function_to_csv(u), encoding="utf-8")


def read_grid_function(path, dim: int = 1, length: float = 2 * math.pi) -> GridFunction:
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != ["index", "re", "im"]:
            raise ValueError(f"{path}: expected header index,re,im, got {header}")
        idx, vals = [], []
        for line_no, row in enumerate(reader, 2):
            if len(row) != 3:
                raise ValueError(f"{path}:{line_no}: expected 3 columns")
            idx.append(int(row[0]))
            vals.append(complex(float(row[1]), float(row[2])))
    if idx != list(range(len(idx))):
        raise ValueError(f"{path}: index column must run 0..count-1 in order")
    N = round(len(vals) ** (1 / dim))
    if N**dim != len(vals):
        raise ValueError(f"{path}: {len(vals)} rows is not a perfect power for dim={dim}")
    return GridFunction(Grid(dim, N, length), np.array(vals))


def write_matrix(entries: np.ndarray, path) -> None:
    """Dense complex matrix as ``row,col,re,im`` rows."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["row", "col", "re", "im"])
        for (i, j), z in np.ndenumerate(entries):
            writer.writerow([i, j, format_value(z.real), format_value(z.imag)])


def rows_csv(report: ExperimentReport) -> str:
    buf = io.StringIO()
    _write_rows(buf, report.columns, report.rows)
    return buf.getvalue()


def summary_csv(summary: dict) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["key", "value"])
    for k, v in summary.items():
        writer.writerow([k, format_value(v)])
    return buf.getvalue()


def payload_digest(report: ExperimentReport) -> str:
    """SHA-256 over the deterministic payload (rows and summary CSVs)."""
    h = hashlib.sha256()
    h.update(rows_csv(report).encode())
    h.update(summary_csv(report.summary).encode())
    return h.hexdigest()


def write_report(report: ExperimentReport, prefix) -> dict:
    """Write ``<prefix>.rows.csv``, ``<prefix>.summary.csv`` and ``<prefix>.meta.json``."""
    prefix = Path(prefix)
    prefix.parent.mkdir(parents=True, exist_ok=True)
    paths = {
        "rows": prefix.with_name(prefix.name + ".rows.csv"),
        "summary": prefix.with_name(prefix.name + ".summary.csv"),
        "meta": prefix.with_name(prefix.name + ".meta.json"),
    }
    paths["rows"].write_text(rows_csv(report), encoding="utf-8")
    paths["summary"].write_text(summary_csv(report.summary), encoding="utf-8")
    meta = dict(report.provenance, experiment=report.experiment, payload_sha256=payload_digest(report))
    paths["meta"].write_text(json.dumps(meta, indent=2, sort_keys=True, default=str) + "\n", encoding="utf-8")
    return paths


def _parse_cell(text: str):
    for conv in (int, float):
        try:
            return conv(text)
        except ValueError:
            pass
    return text


def read_rows(path) -> tuple[list[str], list[dict]]:
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        rows = [{k: _parse_cell(v) for k, v in row.items()} for row in reader]
        return list(reader.fieldnames or []), rows
