import io

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tropotrend import (
    ColumnTableSpec,
    ConfigError,
    EnsembleStats,
    MonthlySeries,
    ParseError,
    SchemaError,
    load_config,
    parse_table,
    to_canonical_tsv,
)
from tropotrend.analysis import generate_ar1_series
from tropotrend.ingest import DEFAULT_REPORTED, parse_canonical_tsv

MSU = ColumnTableSpec(value_column="Trpcs", year_column="year", month_column="mo")


def _msu_text(n, start=(1979, 1)):
    rows = ["year mo Globe Trpcs"]
    idx0 = start[0] * 12 + start[1] - 1
    for i in range(n):
        idx = idx0 + i
        rows.append(f"{idx // 12} {idx % 12 + 1} {0.01 * i:.3f} {-0.5 + 0.002 * i:.3f}")
    return "\n".join(rows) + "\n"


def test_parse_252_rows():
    s = parse_table(_msu_text(252), MSU)
    assert len(s) == 252
    assert (s.start_year, s.start_month) == (1979, 1)
    assert s.label == "Trpcs"
    assert s.values[1] == pytest.approx(-0.498)


def test_parse_uses_first_row_time():
    s = parse_table(_msu_text(30, start=(1978, 12)), MSU)
    assert (s.start_year, s.start_month) == (1978, 12)


def test_missing_column():
    with pytest.raises(SchemaError):
        parse_table(_msu_text(5), ColumnTableSpec(value_column="trpcs", month_column="mo"))
    # column names are case-sensitive; "year" exists but "Year" does not
    with pytest.raises(SchemaError):
        parse_table(_msu_text(5), ColumnTableSpec(value_column="Trpcs", year_column="Year"))


def test_malformed_rows_report_line_numbers():
    text = _msu_text(5).replace("1979 3 0.020 -0.496", "1979 3 0.020 x.y")
    with pytest.raises(ParseError) as exc:
        parse_table(text, MSU, source="msu.txt")
    assert exc.value.line == 4
    assert "msu.txt:line 4" in str(exc.value)
    short = _msu_text(5).replace("1979 2 0.010 -0.498", "1979 2 0.010")
    with pytest.raises(ParseError) as exc:
        parse_table(short, MSU)
    assert exc.value.line == 3


def test_gaps_and_duplicates_rejected():
    lines = _msu_text(6).splitlines()
    with pytest.raises(ParseError, match="gap"):
        parse_table("\n".join(lines[:3] + lines[4:]), MSU)
    with pytest.raises(ParseError, match="duplicate"):
        parse_table("\n".join(lines + lines[-1:]), MSU)


def test_rows_sorted_by_time():
    lines = _msu_text(6).splitlines()
    shuffled = [lines[0]] + lines[1:][::-1]
    assert parse_table("\n".join(shuffled), MSU) == parse_table("\n".join(lines), MSU)


def test_edge_na_trimmed_interior_na_rejected():
    text = "year v\n1979.0 NA\n1979.0833333333333 1.5\n1979.1666666666667 2.5\n1979.25 NA\n"
    s = parse_table(text, ColumnTableSpec(value_column="v"))
    assert (s.start_year, s.start_month, s.values.tolist()) == (1979, 2, [1.5, 2.5])
    bad = "year v\n1979.0 1\n1979.0833333333333 NA\n1979.1666666666667 2.5\n"
    with pytest.raises(ParseError) as exc:
        parse_table(bad, ColumnTableSpec(value_column="v"))
    assert exc.value.line == 3


def test_crlf_skip_lines_and_streams():
    text = "comment line\r\n" + _msu_text(4).replace("\n", "\r\n")
    spec = ColumnTableSpec(value_column="Trpcs", month_column="mo", skip_lines=1)
    assert parse_table(io.StringIO(text), spec) == parse_table(_msu_text(4), MSU)
    assert parse_table(text.encode("utf-8"), spec) == parse_table(_msu_text(4), MSU)


def test_round_trip_on_generated_fixture():
    s = generate_ar1_series(24, 0.2, 0.5, 0.3, seed=42, start_year=1995, start_month=7, label="obs")
    text = to_canonical_tsv(s)
    back = parse_canonical_tsv(text)
    assert back == s
    assert to_canonical_tsv(back) == text
    assert text.startswith("year\tobs\n")
    assert text.count("\n") == 25


@settings(max_examples=200)
@given(
    st.integers(1850, 2100),
    st.integers(1, 12),
    st.lists(st.floats(-1e6, 1e6, allow_nan=False), min_size=1, max_size=60),
)
def test_canonical_tsv_round_trip_property(y, m, values):
    s = MonthlySeries(y, m, values, "v")
    text = to_canonical_tsv(s)
    assert to_canonical_tsv(parse_canonical_tsv(text)) == text
    assert parse_canonical_tsv(text) == s


def test_parse_fixture_file(fixtures_dir):
    s = parse_table((fixtures_dir / "msu_synthetic.txt").read_text(), MSU)
    assert (s.start_year, s.start_month, len(s)) == (1978, 12, 361)
    t = parse_table(
        (fixtures_dir / "tropics_synthetic.tsv").read_text(), ColumnTableSpec(value_column="RSS_T2")
    )
    assert (t.start_year, t.start_month, len(t)) == (1978, 12, 361)


def test_fixtures_regenerate_identically(fixtures_dir, monkeypatch):
    monkeypatch.syspath_prepend(str(fixtures_dir))
    import make_fixtures

    for name, make in make_fixtures.FILES.items():
        assert make() == (fixtures_dir / name).read_text(), name


# --- config -------------------------------------------------------------------


def test_empty_config_gives_published_defaults():
    cfg = load_config("")
    assert cfg.ensemble_t2lt == EnsembleStats(0.215, 0.092, 19)
    assert cfg.ensemble_t2 == EnsembleStats(0.199, 0.098, 19)
    assert cfg.start_year == 1979
    assert cfg.alpha_levels == (0.90, 0.95, 0.975)
    assert cfg.reported_rows == DEFAULT_REPORTED
    assert load_config("{}") == cfg
    assert load_config("  \n") == cfg


def test_n_models_override():
    cfg = load_config('{"n_models": 10}')
    assert cfg.ensemble_t2lt == EnsembleStats(0.215, 0.092, 10)
    assert cfg.ensemble_t2 == EnsembleStats(0.199, 0.098, 10)
    cfg = load_config('{"ensemble_t2": {"n_models": 10}}')
    assert cfg.ensemble_t2.n_models == 10 and cfg.ensemble_t2lt.n_models == 19


def test_partial_overrides():
    cfg = load_config(
        '{"ensemble_t2lt": {"mean_trend": 0.3}, "alpha_levels": [0.95], "start_year": 1980,'
        ' "reported_rows": {"X_T2": {"trend": 0.1, "se": 0.2, "d1star": 1.0}},'
        ' "tolerances": {"rss": 0.5}}'
    )
    assert cfg.ensemble_t2lt == EnsembleStats(0.3, 0.092, 19)
    assert cfg.alpha_levels == (0.95,)
    assert cfg.start_year == 1980
    assert cfg.reported_rows["X_T2"] == {"trend": 0.1, "se_adj": 0.2, "d1_star": 1.0}
    assert "UAH_T2LT" in cfg.reported_rows
    assert cfg.tolerance_for("RSS_T2") == 0.5
    assert cfg.tolerance_for("UAH_T2") == 0.02
    assert cfg.ensemble_for("X_T2") is cfg.ensemble_t2
    assert cfg.ensemble_for("UAH_T2LT") is cfg.ensemble_t2lt


@pytest.mark.parametrize(
    "doc, key",
    [
        ('{"n_models": 1}', "n_models"),
        ('{"alpha_levels": [0.9, 1.5]}', "alpha_levels[1]"),
        ('{"alpha_levels": 0.9}', "alpha_levels"),
        ('{"ensemble_t2": {"inter_model_sd": 0}}', "ensemble_t2.inter_model_sd"),
        ('{"ensemble_t2lt": {"mean": 0.2}}', "ensemble_t2lt.mean"),
        ('{"start_year": "1979"}', "start_year"),
        ('{"bogus": 1}', "bogus"),
        ('{"reported_rows": {"A": {"zz": 1}}}', "reported_rows.A.zz"),
        ("[1, 2]", "<document>"),
        ("{not json", "<document>"),
    ],
)
def test_config_errors_name_the_key(doc, key):
    with pytest.raises(ConfigError) as exc:
        load_config(doc)
    assert exc.value.key == key
    assert repr(key) in str(exc.value)


def test_reported_rows_merge_per_field():
    cfg = load_config('{"reported_rows": {"UAH_T2LT": {"d1star": 1.5}}}')
    row = cfg.reported_rows["UAH_T2LT"]
    assert row["d1_star"] == 1.5
    assert row["trend"] == DEFAULT_REPORTED["UAH_T2LT"]["trend"]
