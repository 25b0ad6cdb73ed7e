"""Datasets and their serialisations: CSV, JSON and a whitespace table.

Every dataset carries a metadata block (tool version, command, config echo,
tolerances). Floats are written in scientific notation with 17 significant
digits so values round-trip exactly and output is byte-stable.
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field

FORMATS = ("csv", "json", "table")


@dataclass
class Dataset:
    columns: list[str]
    rows: list[dict] = field(default_factory=list)
    metadata: dict = field(default_factory=dict)

    def column(self, name: str) -> list:
        return [row.get(name) for row in self.rows]


def format_value(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return f"{value:.16e}"
    return str(value)


def _json_value(value):
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


def _metadata_lines(metadata: dict) -> list[str]:
    lines = []
    for key, value in metadata.items():
        if isinstance(value, dict):
            for sub, v in value.items():
                lines.append(f"# {key}.{sub}: {format_value(v)}")
        else:
            lines.append(f"# {key}: {format_value(value)}")
    return lines


def to_csv(ds: Dataset) -> str:
    buf = io.StringIO()
    for line in _metadata_lines(ds.metadata):
        buf.write(line + "\r\n")
    writer = csv.writer(buf, lineterminator="\r\n")
    writer.writerow(ds.columns)
    for row in ds.rows:
        writer.writerow([format_value(row.get(c)) for c in ds.columns])
    return buf.getvalue()


def to_json(ds: Dataset) -> str:
    payload = {
        "metadata": ds.metadata,
        "columns": ds.columns,
        "rows": [[_json_value(row.get(c)) for c in ds.columns] for row in ds.rows],
    }
    return json.dumps(payload, indent=2, allow_nan=False) + "\n"


def to_table(ds: Dataset) -> str:
    cells = [ds.columns] + [[format_value(row.get(c)) or "-" for c in ds.columns]
                            for row in ds.rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(ds.columns))]
    lines = _metadata_lines(ds.metadata)
    header = "  ".join(c.rjust(w) for c, w in zip(cells[0], widths))
    lines.append("# " + header)
    for r in cells[1:]:
        lines.append("  " + "  ".join(v.rjust(w) for v, w in zip(r, widths)))
    return "\n".join(lines) + "\n"


def render(ds: Dataset, fmt: str) -> str:
    if fmt == "csv":
        return to_csv(ds)
    if fmt == "json":
        return to_json(ds)
    if fmt == "table":
        return to_table(ds)
    raise ValueError(f"unknown format {fmt!r}; choose from {FORMATS}")


def read_csv(text: str) -> Dataset:
    """Parse CSV written by :func:`to_csv`; values come back as strings."""
    meta_lines = []
    body = []
    for line in text.splitlines():
        (meta_lines if line.startswith("#") and not body else body).append(line)
    reader = csv.reader(body)
    columns = next(reader)
    rows = [dict(zip(columns, r)) for r in reader]
    metadata = {}
    for line in meta_lines:
        key, _, value = line[2:].partition(": ")
        metadata[key] = value
    return Dataset(columns, rows, metadata)
