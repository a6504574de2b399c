"""Command-line interface.

Exit codes: 0 success, 1 replication outside tolerance, 2 input error
(unreadable file, parse, schema or config problem), 3 domain error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__, autocorr, stats
from .analysis import (
    ENSEMBLE_FIXED_NOTE,
    ROW_COLUMNS,
    evaluate_endpoint,
    formula_replication,
    monte_carlo_size,
    replicate_report,
    rolling_analysis,
)
from .errors import DegenerateInput, DomainError, InputError, SchemaError
from .ingest import AnalysisConfig, ColumnTableSpec, load_config, parse_table
from .report import FORMATS, Table, machine_float, render
from .series import window
from .tdist import t_quantile
from .trend import fit_trend, trend_ci

EXIT_OK = 0
EXIT_REPLICATION = 1
EXIT_INPUT = 2
EXIT_DOMAIN = 3


def _read(path):
    try:
        return Path(path).read_bytes().decode("utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise InputError(f"{path}: {exc}") from None


def _config(args) -> AnalysisConfig:
    if getattr(args, "config", None):
        return load_config(_read(args.config))
    return load_config("")


def _table_spec(args, column=None):
    return ColumnTableSpec(
        value_column=column or args.column,
        year_column=args.year_column,
        month_column=args.month_column,
        skip_lines=args.skip_lines,
    )


def _series(args, column=None):
    text = _read(args.input)
    return parse_table(text, _table_spec(args, column), source=args.input)


def _header(args):
    lines = _read(args.input).replace("\r\n", "\n").split("\n")
    body = [ln for ln in lines[args.skip_lines :] if ln.strip()]
    return body[0].split() if body else []


def _last_full_year(series):
    return series.end_year if series.end_month == 12 else series.end_year - 1


def _emit(table: Table, fmt: str, out, err):
    out.write(render(table, fmt))
    if fmt == "tsv":
        for note in table.notes:
            err.write(f"note: {note}\n")


def _ensemble(cfg, args, label):
    layer = getattr(args, "layer", None)
    if layer:
        return cfg.ensemble_t2 if layer == "T2" else cfg.ensemble_t2lt
    return cfg.ensemble_for(label)


# --- subcommands ------------------------------------------------------------


def cmd_trend(args, out, err):
    cfg = _config(args)
    series = _series(args)
    start = args.start_year if args.start_year is not None else cfg.start_year
    end = args.end_year if args.end_year is not None else _last_full_year(series)
    win = window(series, start, end)
    fit = fit_trend(win)
    lo, hi = trend_ci(fit, args.level)
    row = {
        "label": args.label or series.label,
        "start_year": start,
        "end_year": end,
        "n": fit.n,
        "trend": fit.slope,
        "ols_se": fit.ols_se,
        "ci_low": lo,
        "ci_high": hi,
        "sd": fit.series_sd,
        "r1": None,
        "n_eff_quenouille": None,
        "n_eff_nychka": None,
        "se_adj": None,
    }
    notes = [f"ar1 method: {autocorr.Ar1Method.parse(args.ar1).value}; se_adj uses n_eff_{args.neff}"]
    try:
        r1 = autocorr.estimate_ar1(fit.residuals, args.ar1).r1
        row["r1"] = r1
        row["n_eff_quenouille"] = autocorr.effective_dof_quenouille(fit.n, r1)
        row["n_eff_nychka"] = autocorr.effective_dof_nychka(fit.n, r1)
        row["se_adj"] = autocorr.adjust_se(fit.ols_se, fit.n, row[f"n_eff_{args.neff}"])
    except DegenerateInput as exc:
        notes.append(f"DegenerateInput: {exc}")
    except DomainError as exc:
        notes.append(f"{type(exc).__name__}: {exc}")
    table = Table(columns=list(row), rows=[row], notes=notes)
    _emit(table, args.format, out, err)
    if args.format != "tsv":
        for note in notes[1:]:
            err.write(f"note: {note}\n")
    return EXIT_OK


def _threshold_columns(levels):
    return [stats.percentile_label(lv) for lv in levels]


def cmd_roll(args, out, err):
    cfg = _config(args)
    series = _series(args)
    label = args.label or series.label
    ensemble = _ensemble(cfg, args, label)
    start = args.start_year if args.start_year is not None else cfg.start_year
    end_from = args.end_from if args.end_from is not None else cfg.reference_end_year
    end_to = args.end_to if args.end_to is not None else _last_full_year(series)
    if end_to < end_from:
        raise DomainError(f"--end-to {end_to} is before --end-from {end_from}")
    rows = rolling_analysis(series, ensemble, start, range(end_from, end_to + 1), args.ar1, args.neff)
    pcols = _threshold_columns(cfg.alpha_levels)
    records = []
    for r in rows:
        rec = r.as_dict()
        for lv, name in zip(cfg.alpha_levels, pcols):
            rec[name] = t_quantile(lv, r.adj_df)
        records.append(rec)
    notes = [
        f"{label}: window starts January {start}; ensemble mean {ensemble.mean_trend}, "
        f"sd {ensemble.inter_model_sd}, n_models {ensemble.n_models}",
        ENSEMBLE_FIXED_NOTE,
        stats.DIVISOR_NOTE,
    ]
    _emit(Table(list(ROW_COLUMNS) + pcols, records, notes), args.format, out, err)
    return EXIT_OK


def cmd_replicate(args, out, err):
    cfg = _config(args)
    if not cfg.reported_rows:
        raise InputError("config carries no reported_rows")
    diffs = []
    if args.input is None:
        mode = "formula"
        for label, rep in cfg.reported_rows.items():
            if "trend" not in rep or "se_adj" not in rep:
                continue
            computed = formula_replication(cfg.ensemble_for(label), rep)
            wanted = {k: rep[k] for k in computed if k in rep}
            diffs += replicate_report(computed, wanted, cfg.formula_tolerances, label)
    else:
        mode = "emulation"
        header = _header(args)
        labels = [args.column] if args.column else [c for c in cfg.reported_rows if c in header]
        if not labels:
            raise SchemaError(f"{args.input}: no column matches a reported label {list(cfg.reported_rows)}")
        for label in labels:
            if label not in cfg.reported_rows:
                raise InputError(f"no reported row for {label!r} in config")
            series = _series(args, column=label)
            row = evaluate_endpoint(
                series, cfg.ensemble_for(label), cfg.start_year, cfg.reference_end_year, args.ar1, args.neff
            )
            diffs += replicate_report(row, cfg.reported_rows[label], cfg.tolerance_for(label), label)
    cols = ["label", "field", "reported", "computed", "abs_diff", "tolerance", "within_tolerance"]
    records = [{c: getattr(d, c) for c in cols} for d in diffs]
    failures = [d for d in diffs if not d.within_tolerance]
    notes = [f"mode: {mode}", stats.DIVISOR_NOTE]
    _emit(Table(cols, records, notes), args.format, out, err)
    if failures:
        for d in failures:
            err.write(
                f"FAIL {d.label} {d.field}: reported {d.reported:.6g}, computed {d.computed:.6g}, "
                f"|diff| {d.abs_diff:.3g} > {d.tolerance:.3g}\n"
            )
        return EXIT_REPLICATION
    return EXIT_OK


def plot_dataset(rows, statistic: str, levels, marker=None) -> dict:
    """Bars, percentile lines and an optional reported marker on one year axis."""
    bars = [[r.end_year, getattr(r, statistic)] for r in rows]
    lines = [
        {
            "percentile": stats.percentile_label(lv),
            "points": [[r.end_year, t_quantile(lv, r.adj_df)] for r in rows],
        }
        for lv in levels
    ]
    return {"statistic": statistic, "bars": bars, "lines": lines, "marker": marker}


def cmd_plotdata(args, out, err):
    cfg = _config(args)
    series = _series(args)
    label = args.label or series.label
    ensemble = _ensemble(cfg, args, label)
    start = args.start_year if args.start_year is not None else cfg.start_year
    end_from = args.end_from if args.end_from is not None else cfg.reference_end_year
    end_to = args.end_to if args.end_to is not None else _last_full_year(series)
    rows = rolling_analysis(series, ensemble, start, range(end_from, end_to + 1), args.ar1, args.neff)
    statistic = "d1_star" if args.null == "ensemble" else "d1_zero"
    marker = None
    reported = cfg.reported_rows.get(label, {})
    if statistic in reported:
        marker = {"position": cfg.reference_end_year, "value": reported[statistic]}
    data = plot_dataset(rows, statistic, cfg.alpha_levels, marker)
    notes = [ENSEMBLE_FIXED_NOTE, stats.DIVISOR_NOTE] if args.null == "ensemble" else []
    if args.format == "json":
        doc = {"label": label, "null": args.null, **data}
        if notes:
            doc["notes"] = notes
        out.write(json.dumps(_round(doc), indent=2) + "\n")
        return EXIT_OK
    pcols = [ln["percentile"] for ln in data["lines"]]
    records = []
    for i, (year, value) in enumerate(data["bars"]):
        rec = {"end_year": year, statistic: value}
        for ln in data["lines"]:
            rec[ln["percentile"]] = ln["points"][i][1]
        rec["reported"] = marker["value"] if marker and marker["position"] == year else None
        records.append(rec)
    _emit(Table(["end_year", statistic] + pcols + ["reported"], records, notes), args.format, out, err)
    return EXIT_OK


def _round(obj):
    if isinstance(obj, float):
        return machine_float(obj)
    if isinstance(obj, dict):
        return {k: _round(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [_round(v) for v in obj]
    return obj


def cmd_simulate(args, out, err):
    res = monte_carlo_size(
        args.n, args.phi, args.replicates, args.seed, args.alpha, args.ar1, args.workers
    )
    row = {
        "n": res.n,
        "phi": res.phi,
        "replicates": res.replicates,
        "seed": res.seed,
        "alpha": res.alpha,
        "naive_rate": res.naive_rate,
        "adjusted_rate": res.adjusted_rate,
        "undefined": res.undefined,
    }
    notes = [
        "two-sided zero-trend tests on trendless AR(1) noise; naive uses n-2 df, "
        "adjusted uses n_eff-2 df with Quenouille n_eff"
    ]
    _emit(Table(list(row), [row], notes), args.format, out, err)
    return EXIT_OK


# --- parser -----------------------------------------------------------------


def _add_table_args(p, column_required=True):
    p.add_argument("--input", required=column_required, help="whitespace-delimited table with a header row")
    p.add_argument("--column", required=False, help="value column (exact, case-sensitive)")
    p.add_argument("--year-column", default="year")
    p.add_argument("--month-column", default=None, help="omit when the year column holds decimal years")
    p.add_argument("--skip-lines", type=int, default=0)
    p.add_argument("--label", default=None, help="series label; defaults to the column name")


def _add_method_args(p):
    p.add_argument("--ar1", choices=["ml", "lag1"], default="ml")
    p.add_argument("--neff", choices=sorted(autocorr.NEFF_METHODS), default="quenouille")


def _add_common(p):
    p.add_argument("--format", choices=FORMATS, default="human")
    p.add_argument("--config", default=None, help="JSON configuration")


def build_parser():
    parser = argparse.ArgumentParser(prog="tropotrend", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("trend", help="OLS trend, AR(1) and adjusted standard error for one window")
    _add_table_args(p)
    _add_common(p)
    _add_method_args(p)
    p.add_argument("--start-year", type=int)
    p.add_argument("--end-year", type=int)
    p.add_argument("--level", type=float, default=0.95, help="confidence level of the OLS interval")
    p.set_defaults(func=cmd_trend)

    p = sub.add_parser("roll", help="statistics for a range of window end years")
    _add_table_args(p)
    _add_common(p)
    _add_method_args(p)
    p.add_argument("--start-year", type=int)
    p.add_argument("--end-from", type=int)
    p.add_argument("--end-to", type=int)
    p.add_argument("--layer", choices=["T2LT", "T2"])
    p.set_defaults(func=cmd_roll)

    p = sub.add_parser("replicate", help="compare computed values with reported ones")
    _add_table_args(p, column_required=False)
    _add_common(p)
    _add_method_args(p)
    p.set_defaults(func=cmd_replicate)

    p = sub.add_parser("plotdata", help="bars and percentile lines for significance plots")
    _add_table_args(p)
    _add_common(p)
    _add_method_args(p)
    p.add_argument("--null", choices=["ensemble", "zero"], default="ensemble")
    p.add_argument("--start-year", type=int)
    p.add_argument("--end-from", type=int)
    p.add_argument("--end-to", type=int)
    p.add_argument("--layer", choices=["T2LT", "T2"])
    p.set_defaults(func=cmd_plotdata)

    p = sub.add_parser("simulate", help="Monte Carlo size of naive and adjusted trend tests")
    p.add_argument("--n", type=int, default=252)
    p.add_argument("--phi", type=float, required=True)
    p.add_argument("--replicates", type=int, default=10000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--ar1", choices=["ml", "lag1"], default="ml")
    p.add_argument("--format", choices=FORMATS, default="human")
    p.set_defaults(func=cmd_simulate)
    return parser


def main(argv=None, out=None, err=None):
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command in ("trend", "roll", "plotdata") and not args.column:
        parser.error(f"{args.command} requires --column")
    try:
        return args.func(args, out, err)
    except InputError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_INPUT
    except DomainError as exc:
        err.write(f"error: {type(exc).__name__}: {exc}\n")
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
