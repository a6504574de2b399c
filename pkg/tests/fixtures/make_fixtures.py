"""Regenerate the synthetic fixture tables.

    python3 tests/fixtures/make_fixtures.py

Every series is trend + stationary AR(1) noise from
``tropotrend.analysis.generate_ar1_series`` with the seed listed below.
"""

from pathlib import Path

import numpy as np

from tropotrend.analysis import generate_ar1_series

HERE = Path(__file__).parent

# label: (trend per decade, phi, innovation sigma, seed)
SERIES = {
    "UAH_T2LT": (0.06, 0.89, 0.137, 1001),
    "UAH_T2": (0.04, 0.87, 0.151, 1002),
    "RSS_T2LT": (0.16, 0.88, 0.146, 1003),
    "RSS_T2": (0.14, 0.87, 0.157, 1004),
}
GLOBE = (0.13, 0.80, 0.12, 1005)

# December 1978 through December 2008, like the satellite archives
START = (1978, 12)
N_MONTHS = 12 * 30 + 1


def _series(params, label):
    trend, phi, sigma, seed = params
    return generate_ar1_series(N_MONTHS, trend, phi, sigma, seed, *START, label=label)


def msu_table():
    """Whitespace table with integer year and month columns."""
    trpcs = _series(SERIES["UAH_T2LT"], "Trpcs")
    globe = _series(GLOBE, "Globe")
    idx = trpcs.start_index + np.arange(len(trpcs))
    lines = ["year mo Globe Trpcs"]
    for i, g, t in zip(idx, globe.values, trpcs.values):
        lines.append(f"{i // 12} {i % 12 + 1:2d} {g:6.3f} {t:6.3f}")
    return "\n".join(lines) + "\n"


def tropics_table():
    """Decimal-year table with one column per label (full precision)."""
    cols = {k: _series(v, k) for k, v in SERIES.items()}
    times = next(iter(cols.values())).times()
    lines = ["year\t" + "\t".join(cols)]
    for i, t in enumerate(times):
        lines.append(f"{float(t)!r}\t" + "\t".join(f"{float(s.values[i])!r}" for s in cols.values()))
    return "\n".join(lines) + "\n"


FILES = {"msu_synthetic.txt": msu_table, "tropics_synthetic.tsv": tropics_table}

if __name__ == "__main__":
    for name, make in FILES.items():
        (HERE / name).write_text(make())
        print("wrote", HERE / name)
