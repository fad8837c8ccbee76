"""Result tables and their CSV/JSON serialization.

Every emitted file embeds the fully resolved configuration, the base
seed, and the tool version, so a result can always be regenerated.  CSV
files carry that metadata as leading '#' comment lines and format
floats with their shortest round-trip representation; JSON mirrors the
same schema under a "meta" object.  Two runs with the same config and
seed produce byte-identical files apart from the two timing lines
(``created_at`` and ``wall_time_s``).
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from . import __version__

#: Meta keys that legitimately differ between identical runs.
VOLATILE_META_KEYS = ("created_at", "wall_time_s")

Cell = float | int | str | None


@dataclass
class ResultTable:
    """A named table of numeric/string cells plus a metadata block."""

    name: str
    columns: list[str]
    rows: list[list[Cell]]
    meta: dict[str, Any] = field(default_factory=dict)

    def column(self, name: str) -> list[Cell]:
        i = self.columns.index(name)
        return [row[i] for row in self.rows]


def _format_cell(value: Cell) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        return repr(value)
    return str(value)


def _parse_cell(text: str) -> Cell:
    if text == "":
        return None
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        return text


def _meta_lines(meta: dict[str, Any]) -> list[str]:
    lines = []
    for key, value in meta.items():
        if isinstance(value, (dict, list)):
            value = json.dumps(value, sort_keys=True)
        lines.append(f"# {key}: {value}")
    return lines


def to_csv(table: ResultTable) -> str:
    buf = io.StringIO()
    for line in _meta_lines(table.meta):
        buf.write(line + "\r\n")
    writer = csv.writer(buf, quoting=csv.QUOTE_MINIMAL)
    writer.writerow(table.columns)
    for row in table.rows:
        writer.writerow([_format_cell(c) for c in row])
    return buf.getvalue()


def from_csv(text: str) -> ResultTable:
    meta: dict[str, Any] = {}
    body_lines = []
    for line in text.splitlines():
        if line.startswith("#"):
            key, _, value = line[1:].partition(":")
            key = key.strip()
            value = value.strip()
            if value.startswith(("{", "[")):
                meta[key] = json.loads(value)
            else:
                meta[key] = value
        elif line.strip():
            body_lines.append(line)
    reader = csv.reader(body_lines)
    records = list(reader)
    if not records:
        raise ValueError("CSV has no header row")
    columns = records[0]
    rows = [[_parse_cell(cell) for cell in rec] for rec in records[1:]]
    return ResultTable(name=str(meta.get("schema", "")), columns=columns,
                       rows=rows, meta=meta)


def to_json(table: ResultTable) -> str:
    payload = {
        "meta": table.meta,
        "schema": table.name,
        "columns": table.columns,
        "rows": table.rows,
    }
    return json.dumps(payload, indent=2, sort_keys=False) + "\n"


def from_json(text: str) -> ResultTable:
    payload = json.loads(text)
    return ResultTable(name=payload.get("schema", ""),
                       columns=payload["columns"],
                       rows=payload["rows"], meta=payload.get("meta", {}))


def emit_table(table: ResultTable, fmt: str, path: str | Path) -> Path:
    """Write the table as 'csv' or 'json'; returns the written path."""
    path = Path(path)
    if fmt == "csv":
        content = to_csv(table)
    elif fmt == "json":
        content = to_json(table)
    else:
        raise ValueError(f"unknown output format {fmt!r}")
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(content)
    except OSError as exc:
        raise OSError(f"failed to write result table to {path}: {exc}") from exc
    return path


def parse_table(path: str | Path) -> ResultTable:
    path = Path(path)
    text = path.read_text()
    if path.suffix == ".json":
        return from_json(text)
    return from_csv(text)


def base_meta(schema: str, seed: int, config: dict[str, Any],
              **extra: Any) -> dict[str, Any]:
    meta = {"schema": schema, "version": __version__, "seed": seed,
            "config": config}
    meta.update(extra)
    return meta
