"""Model-versus-observation trend statistics and significance labels.

All three statistics divide the ensemble spread by ``sqrt(n_models - 1)``.
The textbook form of the non-stochastic variant uses ``sqrt(n_models)``,
but only ``n_models - 1`` reproduces the reference value of 7.16 for
UAH T2LT over 1979-1999.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping

from .errors import DomainError
from .ingest import EnsembleStats
from .tdist import t_cdf, t_quantile

SIGNIFICANT_TWO_SIDED = "significant_two_sided"
SIGNIFICANT_ONE_SIDED = "significant_one_sided"
NOT_SIGNIFICANT = "not_significant"

DIVISOR_NOTE = (
    "ensemble spread is divided by sqrt(n_models - 1), not sqrt(n_models), "
    "in d1_star, d_star and adj_df"
)


def _ensemble_se(ensemble: EnsembleStats) -> float:
    if ensemble.n_models < 2:
        raise DomainError(f"n_models must be >= 2, got {ensemble.n_models}")
    return ensemble.inter_model_sd / math.sqrt(ensemble.n_models - 1)


def d1_star(ensemble: EnsembleStats, b0: float, se_adj: float) -> float:
    """Trend difference over the combined model and observation uncertainty."""
    if se_adj < 0:
        raise DomainError(f"se_adj must be >= 0, got {se_adj}")
    s_m = _ensemble_se(ensemble)
    denom = math.sqrt(s_m * s_m + se_adj * se_adj)
    if denom == 0:
        raise DomainError("both variance terms are zero")
    return (ensemble.mean_trend - b0) / denom


def d_star(ensemble: EnsembleStats, b0: float) -> float:
    """Trend difference treating the observed trend as exact."""
    s_m = _ensemble_se(ensemble)
    if s_m <= 0:
        raise DomainError("inter_model_sd must be > 0")
    return (ensemble.mean_trend - b0) / s_m


def d1_zero(b0: float, se_adj: float) -> float:
    if not se_adj > 0:
        raise DomainError(f"se_adj must be > 0, got {se_adj}")
    return b0 / se_adj


def welch_df_terms(ensemble: EnsembleStats, se_adj: float, n_eff: float) -> tuple[float, float]:
    """Numerator C and denominator D of the combined degrees of freedom.

    With A = (sd / sqrt(M - 1))**2 and B = se_adj**2:
    C = A + B and D = A / (M - 1) + B / (n_eff - 2). Note C is not squared.
    """
    if not n_eff > 2:
        raise DomainError(f"n_eff must be > 2, got {n_eff}")
    if se_adj < 0:
        raise DomainError(f"se_adj must be >= 0, got {se_adj}")
    m = ensemble.n_models
    a = _ensemble_se(ensemble) ** 2
    b = se_adj * se_adj
    c = a + b
    d = a / (m - 1) + b / (n_eff - 2)
    if d == 0:
        raise DomainError("both variance terms are zero")
    return c, d


def welch_df(ensemble: EnsembleStats, se_adj: float, n_eff: float) -> float:
    c, d = welch_df_terms(ensemble, se_adj, n_eff)
    return c / d


def percentile_label(level: float) -> str:
    """0.9 -> 'p90', 0.975 -> 'p975'."""
    digits = f"{level * 100:.10g}".replace(".", "")
    return f"p{digits}"


@dataclass(frozen=True)
class Classification:
    level: float
    one_sided: bool  # stat > t_{level}
    two_sided: bool  # |stat| > t_{1 - (1 - level)/2}
    one_sided_threshold: float
    two_sided_threshold: float

    @property
    def label(self) -> str:
        if self.two_sided:
            return SIGNIFICANT_TWO_SIDED
        if self.one_sided:
            return SIGNIFICANT_ONE_SIDED
        return NOT_SIGNIFICANT

    @property
    def percentile(self) -> str:
        return percentile_label(self.level)


def classify(stat: float, df: float, alpha_levels) -> dict[float, Classification]:
    """Test ``stat`` against the t percentiles named by ``alpha_levels``.

    For a level such as 0.95 the one-sided check compares ``stat`` with the
    95th percentile and the two-sided check compares ``|stat|`` with the
    97.5th. Both outcomes are kept rather than choosing a convention.
    """
    if not df > 0:
        raise DomainError(f"degrees of freedom must be > 0, got {df}")
    out = {}
    for level in alpha_levels:
        one = t_quantile(level, df)
        two = t_quantile(1 - (1 - level) / 2, df)
        out[level] = Classification(level, stat > one, abs(stat) > two, one, two)
    return out


@dataclass(frozen=True)
class TestResult:
    d1_star: float
    d_star: float
    d1_zero: float
    adj_df: float
    se_adj: float
    n_eff: float
    one_sided_p: float
    classifications: Mapping[float, Classification] = field(default_factory=dict)

    __test__ = False  # not a pytest class


def run_tests(ensemble: EnsembleStats, b0: float, se_adj: float, n_eff: float, alpha_levels=(0.90, 0.95, 0.975)):
    """Every statistic for one observed trend, classified at ``alpha_levels``."""
    d1 = d1_star(ensemble, b0, se_adj)
    df = welch_df(ensemble, se_adj, n_eff)
    return TestResult(
        d1_star=d1,
        d_star=d_star(ensemble, b0),
        d1_zero=d1_zero(b0, se_adj),
        adj_df=df,
        se_adj=se_adj,
        n_eff=n_eff,
        one_sided_p=t_cdf(-d1, df),
        classifications=classify(d1, df, alpha_levels),
    )
