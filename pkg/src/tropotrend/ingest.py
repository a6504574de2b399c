"""Readers for observation tables and the analysis configuration.

Tables are whitespace delimited with a header row naming the columns, e.g.::

    year mo Globe Trpcs
    1978 12 -0.30 -0.21
    1979  1 -0.49 -0.52

With ``month_column=None`` the year column must hold decimal years on the
monthly grid (``1979.0``, ``1979.0833...``), which is the shape of the
canonical two-column TSV emitted by :func:`to_canonical_tsv`.
"""

from __future__ import annotations

import io
import json
import math
from dataclasses import dataclass, field, replace
from typing import Mapping

from .errors import ConfigError, ParseError, SchemaError
from .series import MonthlySeries, month_index_from_decimal

MISSING_TOKENS = frozenset({"NA", "NaN", "nan"})


@dataclass(frozen=True)
class ColumnTableSpec:
    value_column: str
    year_column: str = "year"
    month_column: str | None = None
    skip_lines: int = 0

    def __post_init__(self):
        if not self.value_column:
            raise ValueError("value_column must be non-empty")
        if self.skip_lines < 0:
            raise ValueError("skip_lines must be >= 0")


def _lines(text):
    if hasattr(text, "read"):
        text = text.read()
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    return text.replace("\r\n", "\n").replace("\r", "\n").split("\n")


def parse_table(text, spec: ColumnTableSpec, source=None) -> MonthlySeries:
    """Parse one column of a header-plus-rows table into a :class:`MonthlySeries`.

    ``NA`` cells at the start or end of the chosen column are trimmed (tables
    produced by aligning series of unequal length carry these); an ``NA``
    between valid values is a :class:`ParseError`, as is any other
    non-numeric cell.
    """
    lines = _lines(text)
    pos = spec.skip_lines
    while pos < len(lines) and not lines[pos].strip():
        pos += 1
    if pos >= len(lines):
        raise ParseError("no header row", line=pos + 1, source=source)
    header = lines[pos].split()
    header_line = pos + 1

    def column(name):
        try:
            return header.index(name)
        except ValueError:
            raise SchemaError(
                f"column {name!r} not in header {header} (line {header_line})"
            ) from None

    value_col = column(spec.value_column)
    year_col = column(spec.year_column)
    month_col = column(spec.month_column) if spec.month_column is not None else None

    rows = []  # (month_index, value or None, line number)
    for lineno, raw in enumerate(lines[pos + 1 :], start=header_line + 1):
        cells = raw.split()
        if not cells:
            continue
        if len(cells) != len(header):
            raise ParseError(
                f"expected {len(header)} fields, found {len(cells)}", line=lineno, source=source
            )
        try:
            if month_col is None:
                idx = month_index_from_decimal(float(cells[year_col]))
            else:
                year = int(cells[year_col])
                month = int(cells[month_col])
                if not 1 <= month <= 12:
                    raise ValueError(f"month {month} outside 1..12")
                idx = year * 12 + month - 1
        except ValueError as exc:
            raise ParseError(f"bad time stamp: {exc}", line=lineno, source=source) from None
        cell = cells[value_col]
        if cell in MISSING_TOKENS:
            value = None
        else:
            try:
                value = float(cell)
            except ValueError:
                raise ParseError(
                    f"non-numeric value {cell!r} in column {spec.value_column!r}",
                    line=lineno,
                    source=source,
                ) from None
            if not math.isfinite(value):
                raise ParseError(f"non-finite value {cell!r}", line=lineno, source=source)
        rows.append((idx, value, lineno))

    rows.sort(key=lambda r: r[0])
    for (a, _, _), (b, _, line_b) in zip(rows, rows[1:]):
        if b == a:
            raise ParseError("duplicate month", line=line_b, source=source)
        if b != a + 1:
            raise ParseError(f"gap of {b - a - 1} month(s) before this row", line=line_b, source=source)

    present = [i for i, r in enumerate(rows) if r[1] is not None]
    if not present:
        raise ParseError(f"no numeric values in column {spec.value_column!r}", source=source)
    kept = rows[present[0] : present[-1] + 1]
    for _, value, lineno in kept:
        if value is None:
            raise ParseError("missing value inside the series", line=lineno, source=source)
    first = kept[0][0]
    return MonthlySeries(first // 12, first % 12 + 1, [r[1] for r in kept], spec.value_column)


def to_canonical_tsv(series: MonthlySeries) -> str:
    """Two-column TSV (decimal year, value) at full round-trip precision."""
    out = io.StringIO()
    out.write(f"year\t{series.label or 'value'}\n")
    for t, v in zip(series.times(), series.values):
        out.write(f"{float(t)!r}\t{float(v)!r}\n")
    return out.getvalue()


def parse_canonical_tsv(text, source=None) -> MonthlySeries:
    lines = _lines(text)
    header = lines[0].split() if lines else []
    if len(header) != 2:
        raise ParseError("canonical TSV needs exactly two header columns", line=1, source=source)
    return parse_table(text, ColumnTableSpec(value_column=header[1], year_column=header[0]), source)


# --- configuration -------------------------------------------------------


@dataclass(frozen=True)
class EnsembleStats:
    """Model ensemble summary: mean trend, inter-model SD (deg C/decade), model count."""

    mean_trend: float
    inter_model_sd: float
    n_models: int

    def __post_init__(self):
        if self.n_models < 2:
            raise ValueError(f"n_models must be >= 2, got {self.n_models}")
        if not self.inter_model_sd >= 0:
            raise ValueError(f"inter_model_sd must be >= 0, got {self.inter_model_sd}")


# Canonical field names in reported rows, with the short aliases used by the
# published tables.
FIELD_ALIASES = {
    "trend": "trend",
    "se": "se_adj",
    "se_adj": "se_adj",
    "sd": "series_sd",
    "series_sd": "series_sd",
    "r1": "r1",
    "neff": "n_eff",
    "n_eff": "n_eff",
    "d1star": "d1_star",
    "d1_star": "d1_star",
    "dstar": "d_star",
    "d_star": "d_star",
    "adj_df": "adj_df",
    "d1zero": "d1_zero",
    "d1_zero": "d1_zero",
}

DEFAULT_ENSEMBLES = {
    "T2LT": EnsembleStats(0.215, 0.092, 19),
    "T2": EnsembleStats(0.199, 0.098, 19),
}

# Published 1979-1999 benchmark rows; adj_df is the combined-variance
# degrees of freedom recomputed from the published se and n_eff.
DEFAULT_REPORTED = {
    "UAH_T2LT": dict(trend=0.060, se_adj=0.138, series_sd=0.299, r1=0.891, n_eff=14.5,
                     d1_star=1.11, d_star=7.16, adj_df=12.6),
    "RSS_T2LT": dict(trend=0.166, se_adj=0.132, series_sd=0.312, r1=0.884, n_eff=15.6,
                     d1_star=0.37, d_star=2.25, adj_df=13.7),
    "UAH_T2": dict(trend=0.043, se_adj=0.129, series_sd=0.306, r1=0.873, n_eff=17.1,
                   d1_star=1.19, d_star=6.78, adj_df=15.2),
    "RSS_T2": dict(trend=0.142, se_adj=0.129, series_sd=0.319, r1=0.871, n_eff=17.3,
                   d1_star=0.44, d_star=2.48, adj_df=15.4),
}

DEFAULT_TOLERANCES = {"UAH": 0.02, "RSS": 0.20, "default": 0.02}

# Formula-only replication feeds three-digit published inputs back through
# the formulas; d_star amplifies a 0.0005 rounding of the trend by ~43.
DEFAULT_FORMULA_TOLERANCES = {"d1_star": 0.02, "d_star": 0.05, "adj_df": 0.1}


@dataclass(frozen=True)
class AnalysisConfig:
    ensemble_t2lt: EnsembleStats = DEFAULT_ENSEMBLES["T2LT"]
    ensemble_t2: EnsembleStats = DEFAULT_ENSEMBLES["T2"]
    reported_rows: Mapping[str, Mapping[str, float]] = field(
        default_factory=lambda: {k: dict(v) for k, v in DEFAULT_REPORTED.items()}
    )
    alpha_levels: tuple = (0.90, 0.95, 0.975)
    start_year: int = 1979
    reference_end_year: int = 1999
    tolerances: Mapping[str, float] = field(default_factory=lambda: dict(DEFAULT_TOLERANCES))
    formula_tolerances: Mapping[str, float] = field(
        default_factory=lambda: dict(DEFAULT_FORMULA_TOLERANCES)
    )

    def ensemble_for(self, label: str) -> EnsembleStats:
        """Pick the ensemble by layer suffix: ``*_T2LT`` or ``*_T2``; anything else is T2LT."""
        layer = label.rsplit("_", 1)[-1].upper()
        return self.ensemble_t2 if layer == "T2" else self.ensemble_t2lt

    def tolerance_for(self, label: str) -> float:
        prefix = label.split("_", 1)[0].upper()
        return self.tolerances.get(prefix, self.tolerances.get("default", 0.02))


_TOP_KEYS = {
    "start_year", "alpha_levels", "n_models", "ensemble_t2lt", "ensemble_t2",
    "reported_rows", "reference_end_year", "tolerances", "formula_tolerances",
}
_ENSEMBLE_KEYS = {"mean_trend", "inter_model_sd", "n_models"}


def _number(key, value, kind=float):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(key, f"expected a number, got {value!r}")
    if kind is int:
        if float(value) != int(value):
            raise ConfigError(key, f"expected an integer, got {value!r}")
        return int(value)
    value = float(value)
    if not math.isfinite(value):
        raise ConfigError(key, "must be finite")
    return value


def _mapping(key, value):
    if not isinstance(value, dict):
        raise ConfigError(key, f"expected an object, got {type(value).__name__}")
    return value


def _ensemble(key, doc, base: EnsembleStats, n_models_default):
    doc = _mapping(key, doc)
    for k in doc:
        if k not in _ENSEMBLE_KEYS:
            raise ConfigError(f"{key}.{k}", "unknown key")
    out = replace(base, n_models=n_models_default)
    if "mean_trend" in doc:
        out = replace(out, mean_trend=_number(f"{key}.mean_trend", doc["mean_trend"]))
    if "inter_model_sd" in doc:
        sd = _number(f"{key}.inter_model_sd", doc["inter_model_sd"])
        if sd <= 0:
            raise ConfigError(f"{key}.inter_model_sd", "must be > 0")
        out = replace(out, inter_model_sd=sd)
    if "n_models" in doc:
        out = replace(out, n_models=_number(f"{key}.n_models", doc["n_models"], int))
    if out.n_models < 2:
        raise ConfigError(f"{key}.n_models", "must be >= 2")
    return out


def load_config(text) -> AnalysisConfig:
    """Read a JSON configuration; every key is optional.

    Missing keys fall back to the published 1979-1999 ensemble statistics:
    T2LT (0.215, 0.092), T2 (0.199, 0.098), 19 models, alpha levels
    0.90/0.95/0.975, start year 1979.
    """
    if isinstance(text, dict):
        doc = text
    else:
        src = "\n".join(_lines(text))
        if not src.strip():
            doc = {}
        else:
            try:
                doc = json.loads(src)
            except json.JSONDecodeError as exc:
                raise ConfigError("<document>", f"invalid JSON at line {exc.lineno}: {exc.msg}") from None
    doc = _mapping("<document>", doc)
    for key in doc:
        if key not in _TOP_KEYS:
            raise ConfigError(key, "unknown key")

    kwargs = {}
    if "start_year" in doc:
        kwargs["start_year"] = _number("start_year", doc["start_year"], int)
    if "reference_end_year" in doc:
        kwargs["reference_end_year"] = _number("reference_end_year", doc["reference_end_year"], int)
    if "alpha_levels" in doc:
        levels = doc["alpha_levels"]
        if not isinstance(levels, list):
            raise ConfigError("alpha_levels", "expected a list")
        parsed = []
        for i, lv in enumerate(levels):
            lv = _number(f"alpha_levels[{i}]", lv)
            if not 0 < lv < 1:
                raise ConfigError(f"alpha_levels[{i}]", f"{lv} outside (0, 1)")
            parsed.append(lv)
        kwargs["alpha_levels"] = tuple(parsed)

    n_models = 19
    if "n_models" in doc:
        n_models = _number("n_models", doc["n_models"], int)
        if n_models < 2:
            raise ConfigError("n_models", "must be >= 2")
    for key, layer in (("ensemble_t2lt", "T2LT"), ("ensemble_t2", "T2")):
        kwargs[key] = _ensemble(key, doc.get(key, {}), DEFAULT_ENSEMBLES[layer], n_models)

    if "reported_rows" in doc:
        rows = {k: dict(v) for k, v in DEFAULT_REPORTED.items()}
        for label, rec in _mapping("reported_rows", doc["reported_rows"]).items():
            rec = _mapping(f"reported_rows.{label}", rec)
            parsed = {}
            for name, value in rec.items():
                canon = FIELD_ALIASES.get(name)
                if canon is None:
                    raise ConfigError(f"reported_rows.{label}.{name}", "unknown field")
                parsed[canon] = _number(f"reported_rows.{label}.{name}", value)
            rows[label] = {**rows.get(label, {}), **parsed}  # field-level merge
        kwargs["reported_rows"] = rows

    if "tolerances" in doc:
        tol = dict(DEFAULT_TOLERANCES)
        for k, v in _mapping("tolerances", doc["tolerances"]).items():
            v = _number(f"tolerances.{k}", v)
            if v < 0:
                raise ConfigError(f"tolerances.{k}", "must be >= 0")
            tol[k.upper() if k != "default" else k] = v
        kwargs["tolerances"] = tol
    if "formula_tolerances" in doc:
        tol = dict(DEFAULT_FORMULA_TOLERANCES)
        for k, v in _mapping("formula_tolerances", doc["formula_tolerances"]).items():
            canon = FIELD_ALIASES.get(k)
            if canon is None:
                raise ConfigError(f"formula_tolerances.{k}", "unknown field")
            v = _number(f"formula_tolerances.{k}", v)
            if v < 0:
                raise ConfigError(f"formula_tolerances.{k}", "must be >= 0")
            tol[canon] = v
        kwargs["formula_tolerances"] = tol

    return AnalysisConfig(**kwargs)
