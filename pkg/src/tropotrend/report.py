"""Table emitters: human (3 significant digits), TSV and JSON (15 digits)."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

FORMATS = ("human", "tsv", "json")
MACHINE_DIGITS = 15
HUMAN_DIGITS = 3


@dataclass
class Table:
    columns: list
    rows: list  # list of dicts keyed by column
    notes: list = field(default_factory=list)
    meta: dict = field(default_factory=dict)


def machine_float(x: float) -> float:
    """Round to the 15 significant digits used by TSV and JSON output."""
    return float(f"{x:.{MACHINE_DIGITS}g}")


def _human_number(x: float) -> str:
    if math.isnan(x):
        return "NA"
    if math.isinf(x):
        return "Inf" if x > 0 else "-Inf"
    s = f"{x:#.{HUMAN_DIGITS}g}"
    if "e" in s:
        return s
    return s.rstrip(".")


def _cell(value, fmt):
    if value is None:
        return "NA"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        if fmt == "human":
            return _human_number(value)
        if math.isnan(value):
            return "NA"
        return f"{value:.{MACHINE_DIGITS}g}"
    return str(value)


def _json_value(value):
    if isinstance(value, float):
        if not math.isfinite(value):
            return None
        return machine_float(value)
    if isinstance(value, dict):
        return {k: _json_value(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_value(v) for v in value]
    return value


def to_tsv(table: Table) -> str:
    lines = ["\t".join(table.columns)]
    for row in table.rows:
        lines.append("\t".join(_cell(row.get(c), "tsv") for c in table.columns))
    return "\n".join(lines) + "\n"


def to_human(table: Table) -> str:
    cells = [[_cell(row.get(c), "human") for c in table.columns] for row in table.rows]
    widths = [len(c) for c in table.columns]
    for r in cells:
        widths = [max(w, len(v)) for w, v in zip(widths, r)]
    out = []
    for k, v in table.meta.items():
        out.append(f"{k}: {_cell(v, 'human')}")
    out.append("  ".join(c.rjust(w) for c, w in zip(table.columns, widths)))
    for r in cells:
        out.append("  ".join(v.rjust(w) for v, w in zip(r, widths)))
    for note in table.notes:
        out.append(f"note: {note}")
    return "\n".join(out) + "\n"


def to_json(table: Table) -> str:
    doc = dict(table.meta)
    doc["columns"] = list(table.columns)
    doc["rows"] = [{c: row.get(c) for c in table.columns} for row in table.rows]
    if table.notes:
        doc["notes"] = list(table.notes)
    return json.dumps(_json_value(doc), indent=2) + "\n"


def render(table: Table, fmt: str) -> str:
    if fmt == "human":
        return to_human(table)
    if fmt == "tsv":
        return to_tsv(table)
    if fmt == "json":
        return to_json(table)
    raise ValueError(f"unknown format {fmt!r}")
