"""OLS trend on the centered decadal time axis."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateInput, DomainError
from .series import MonthlySeries, centered_decadal_time
from .tdist import t_quantile


@dataclass(frozen=True)
class TrendFit:
    slope: float  # deg C / decade
    intercept: float  # value at the window's mid time
    ols_se: float
    residuals: np.ndarray = field(repr=False)
    n: int
    ssx: float
    series_sd: float

    @property
    def t_value(self) -> float:
        return self.slope / self.ols_se

    @property
    def df(self) -> int:
        return self.n - 2


def fit_trend(series: MonthlySeries) -> TrendFit:
    """Least-squares line through ``series`` against centered decades.

    The centered axis is orthogonal to the constant column, so the slope is
    ``sum(t*y) / sum(t**2)`` and the intercept is the sample mean.
    ``ols_se = sqrt(sum(resid**2) / (n - 2) / ssx)``; ``series_sd`` uses the
    n - 1 denominator.
    """
    n = len(series)
    if n < 3:
        raise DegenerateInput(f"trend fit needs at least 3 samples, got {n}")
    axis = centered_decadal_time(series)
    t = axis.t
    ssx = axis.ssx
    if ssx <= 0:
        raise DegenerateInput("time axis has zero variance")
    y = series.values
    intercept = float(np.mean(y))
    slope = float(np.dot(t, y - intercept) / ssx)
    resid = y - intercept - slope * t
    resid.setflags(write=False)
    ols_se = math.sqrt(float(np.dot(resid, resid)) / (n - 2) / ssx)
    return TrendFit(
        slope=slope,
        intercept=intercept,
        ols_se=ols_se,
        residuals=resid,
        n=n,
        ssx=ssx,
        series_sd=float(np.std(y, ddof=1)),
    )


def trend_ci(fit: TrendFit, level: float) -> tuple[float, float]:
    """Unadjusted confidence interval: slope +/- t_{(1+level)/2, n-2} * ols_se."""
    if not 0 < level < 1:
        raise DomainError(f"confidence level must lie in (0, 1), got {level}")
    half = t_quantile((1 + level) / 2, fit.df) * fit.ols_se
    return fit.slope - half, fit.slope + half
