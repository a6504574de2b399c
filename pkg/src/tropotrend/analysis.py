"""End-to-end evaluation of observed trends against a model ensemble.

Random numbers come from numpy's Philox4x64-10 counter-based generator.
Every simulated series is keyed by ``(seed, stream)``, so a
Monte Carlo run gives the same answer however its replicates are split
across worker processes.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from typing import Iterable, Mapping

import numpy as np
from scipy.signal import lfilter

from . import autocorr, stats
from .errors import DegenerateInput, DomainError, TropoTrendError
from .ingest import EnsembleStats
from .series import MonthlySeries, centered_decadal_time, window
from .tdist import t_cdf
from .trend import fit_trend

ROW_COLUMNS = (
    "end_year", "trend", "se_adj", "series_sd", "r1", "n_eff",
    "d1_star", "d_star", "adj_df", "d1_zero",
)

ENSEMBLE_FIXED_NOTE = (
    "ensemble mean and spread are the 1979-1999 values, held fixed for every end year"
)


@dataclass(frozen=True)
class EndpointRow:
    end_year: int
    trend: float
    se_adj: float
    series_sd: float
    r1: float
    n_eff: float
    d1_star: float
    d_star: float
    adj_df: float
    d1_zero: float
    n: int = 0

    def as_dict(self, columns=ROW_COLUMNS) -> dict:
        d = asdict(self)
        return {k: d[k] for k in columns}


def evaluate_endpoint(
    series: MonthlySeries,
    ensemble: EnsembleStats,
    start_year: int,
    end_year: int,
    ar1_method="maximum_likelihood",
    neff_method="quenouille",
) -> EndpointRow:
    """All statistics for the window January ``start_year`` .. December ``end_year``.

    window -> OLS trend -> AR(1) of residuals -> n_eff -> adjusted se ->
    d1_star, d_star, adj_df, d1_zero.
    """
    win = window(series, start_year, end_year)
    fit = fit_trend(win)
    scale = float(np.max(np.abs(win.values)))
    rms = math.sqrt(float(np.mean(fit.residuals**2)))
    if rms <= 1e-10 * scale or rms == 0:
        raise DegenerateInput(
            f"{win.label or 'series'} {start_year}-{end_year}: residual variance is zero"
        )
    r1 = autocorr.estimate_ar1(fit.residuals, ar1_method).r1
    n_eff = autocorr.effective_dof(fit.n, r1, neff_method)
    se_adj = autocorr.adjust_se(fit.ols_se, fit.n, n_eff)
    return EndpointRow(
        end_year=end_year,
        trend=fit.slope,
        se_adj=se_adj,
        series_sd=fit.series_sd,
        r1=r1,
        n_eff=n_eff,
        d1_star=stats.d1_star(ensemble, fit.slope, se_adj),
        d_star=stats.d_star(ensemble, fit.slope),
        adj_df=stats.welch_df(ensemble, se_adj, n_eff),
        d1_zero=stats.d1_zero(fit.slope, se_adj),
        n=fit.n,
    )


def rolling_analysis(
    series: MonthlySeries,
    ensemble: EnsembleStats,
    start_year: int,
    end_years: Iterable[int],
    ar1_method="maximum_likelihood",
    neff_method="quenouille",
) -> list[EndpointRow]:
    years = sorted(end_years)
    if not years:
        raise DomainError("empty range of end years")
    rows = []
    for year in years:
        try:
            rows.append(
                evaluate_endpoint(series, ensemble, start_year, year, ar1_method, neff_method)
            )
        except TropoTrendError as exc:
            err = type(exc)(f"end year {year}: {exc}")
            err.end_year = year
            raise err from exc
    return rows


# --- replication ------------------------------------------------------------


@dataclass(frozen=True)
class ReplicationDiff:
    label: str
    field: str
    reported: float
    computed: float
    abs_diff: float
    within_tolerance: bool
    tolerance: float


def replicate_report(
    computed,
    reported: Mapping[str, float],
    tolerances,
    label: str = "",
) -> list[ReplicationDiff]:
    """Compare every field present in both ``computed`` and ``reported``.

    ``tolerances`` is either one absolute tolerance or a per-field mapping;
    fields missing from the mapping are compared at tolerance 0.
    """
    if isinstance(computed, EndpointRow):
        computed = asdict(computed)
    diffs = []
    for name, rep in reported.items():
        if name not in computed or name == "end_year":
            continue
        comp = float(computed[name])
        tol = float(tolerances) if isinstance(tolerances, (int, float)) else float(tolerances.get(name, 0.0))
        diff = abs(float(rep) - comp)
        diffs.append(ReplicationDiff(label, name, float(rep), comp, diff, diff <= tol, tol))
    return diffs


def formula_replication(ensemble: EnsembleStats, reported: Mapping[str, float]) -> dict:
    """Recompute d1_star, d_star and adj_df from a published (trend, se, n_eff)."""
    b0 = reported["trend"]
    se = reported["se_adj"]
    out = {
        "d1_star": stats.d1_star(ensemble, b0, se),
        "d_star": stats.d_star(ensemble, b0),
    }
    if "n_eff" in reported:
        out["adj_df"] = stats.welch_df(ensemble, se, reported["n_eff"])
    return out


# --- simulation -------------------------------------------------------------


def make_rng(seed: int, stream: int | None = None) -> np.random.Generator:
    """Philox generator keyed on ``seed`` (and ``stream`` for sub-streams)."""
    if isinstance(seed, bool) or not isinstance(seed, (int, np.integer)) or seed < 0:
        raise DomainError(f"seed must be a non-negative integer, got {seed!r}")
    # spawn_key rather than extra entropy words: SeedSequence zero-pads
    # entropy, so [seed] and [seed, 0] would collide
    key = () if stream is None else (int(stream),)
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(int(seed), spawn_key=key)))


def _ar1_noise(rng, n, phi, sigma):
    z = rng.standard_normal(n)
    x = sigma * z
    x[0] = sigma * z[0] / math.sqrt(1.0 - phi * phi)
    return lfilter([1.0], [1.0, -phi], x)


def generate_ar1_series(
    n: int,
    trend: float,
    phi: float,
    sigma: float,
    seed: int,
    start_year: int = 1979,
    start_month: int = 1,
    label: str = "synthetic",
    stream: int | None = None,
) -> MonthlySeries:
    """Linear trend (per decade, on the centered axis) plus stationary AR(1) noise.

    The first noise value is drawn from the stationary distribution
    N(0, sigma**2 / (1 - phi**2)); later values follow
    e_t = phi * e_{t-1} + sigma * z_t.
    """
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    if not abs(phi) < 1:
        raise DomainError(f"|phi| must be < 1, got {phi}")
    if not sigma >= 0:
        raise DomainError(f"sigma must be >= 0, got {sigma}")
    rng = make_rng(seed, stream)
    e = _ar1_noise(rng, n, phi, sigma)
    t = (2.0 * np.arange(n) - (n - 1)) / 240.0
    return MonthlySeries(start_year, start_month, trend * t + e, label)


@dataclass(frozen=True)
class MonteCarloSize:
    n: int
    phi: float
    replicates: int
    seed: int
    alpha: float
    naive_rate: float
    adjusted_rate: float
    naive_rejections: int
    adjusted_rejections: int
    undefined: int  # replicates whose n_eff <= 2; counted as not rejected


def _size_chunk(args):
    n, phi, seed, alpha, ar1_method, indices = args
    t = centered_decadal_time(MonthlySeries(2000, 1, np.zeros(n))).t
    ssx = float(np.dot(t, t))
    naive = adjusted = undefined = 0
    for i in indices:
        y = _ar1_noise(make_rng(seed, i), n, phi, 1.0)
        y = y - y.mean()
        slope = float(np.dot(t, y)) / ssx
        resid = y - slope * t
        ols_se = math.sqrt(float(np.dot(resid, resid)) / (n - 2) / ssx)
        stat = slope / ols_se
        if 2.0 * t_cdf(-abs(stat), n - 2) < alpha:
            naive += 1
        r1 = autocorr.estimate_ar1(resid, ar1_method).r1
        n_eff = autocorr.effective_dof_quenouille(n, r1)
        if n_eff <= 2:
            undefined += 1
            continue
        zstat = stats.d1_zero(slope, autocorr.adjust_se(ols_se, n, n_eff))
        if 2.0 * t_cdf(-abs(zstat), n_eff - 2) < alpha:
            adjusted += 1
    return naive, adjusted, undefined


def monte_carlo_size(
    n: int,
    phi: float,
    replicates: int,
    seed: int,
    alpha: float = 0.05,
    ar1_method="maximum_likelihood",
    workers: int = 1,
) -> MonteCarloSize:
    """Empirical two-sided size of the naive and the AR(1)-adjusted zero-trend tests.

    Series are pure AR(1) noise (no trend). The naive test uses the OLS
    t statistic with n - 2 df; the adjusted one uses d1_zero with
    n_eff - 2 df, n_eff from the Quenouille formula.
    """
    if replicates < 100:
        raise DomainError(f"replicates must be >= 100, got {replicates}")
    if n < 8:
        raise DomainError(f"n must be >= 8, got {n}")
    if not abs(phi) < 1:
        raise DomainError(f"|phi| must be < 1, got {phi}")
    if not 0 < alpha < 1:
        raise DomainError(f"alpha must lie in (0, 1), got {alpha}")
    make_rng(seed)  # validates the seed
    ar1_method = autocorr.Ar1Method.parse(ar1_method)
    workers = max(1, int(workers))
    chunks = [list(range(k, replicates, workers)) for k in range(workers)]
    jobs = [(n, phi, seed, alpha, ar1_method, c) for c in chunks if c]
    if len(jobs) == 1:
        results = [_size_chunk(jobs[0])]
    else:
        with ProcessPoolExecutor(max_workers=len(jobs)) as pool:
            results = list(pool.map(_size_chunk, jobs))
    naive = sum(r[0] for r in results)
    adjusted = sum(r[1] for r in results)
    undefined = sum(r[2] for r in results)
    return MonteCarloSize(
        n=n,
        phi=phi,
        replicates=replicates,
        seed=seed,
        alpha=alpha,
        naive_rate=naive / replicates,
        adjusted_rate=adjusted / replicates,
        naive_rejections=naive,
        adjusted_rejections=adjusted,
        undefined=undefined,
    )
