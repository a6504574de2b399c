"""Trend consistency tests for monthly series with AR(1)-adjusted uncertainty."""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    ConfigError,
    DegenerateInput,
    DofTooSmall,
    DomainError,
    NonConvergence,
    ParseError,
    RangeError,
    SchemaError,
    TropoTrendError,
)
from .series import MonthlySeries, TimeAxis, centered_decadal_time, window  # noqa: E402
from .ingest import (  # noqa: E402
    AnalysisConfig,
    ColumnTableSpec,
    EnsembleStats,
    load_config,
    parse_table,
    to_canonical_tsv,
)
from .trend import TrendFit, fit_trend, trend_ci  # noqa: E402
from .autocorr import (  # noqa: E402
    Ar1Estimate,
    adjust_se,
    effective_dof_nychka,
    effective_dof_quenouille,
    estimate_ar1,
)
from .tdist import t_cdf, t_quantile  # noqa: E402
from .stats import TestResult, classify, d1_star, d1_zero, d_star, run_tests, welch_df  # noqa: E402
from .analysis import (  # noqa: E402
    EndpointRow,
    ReplicationDiff,
    evaluate_endpoint,
    generate_ar1_series,
    monte_carlo_size,
    replicate_report,
    rolling_analysis,
)
