"""AR(1) fits to trend residuals and effective degrees of freedom.

``estimate_ar1`` in maximum-likelihood mode maximizes the exact Gaussian
likelihood of an AR(1) process with unknown mean::

    x_t - mu = phi * (x_{t-1} - mu) + e_t,    e_t ~ N(0, sigma^2),
    x_1 - mu ~ N(0, sigma^2 / (1 - phi^2))

For fixed ``phi`` the mean and innovation variance have closed forms, which
leaves a one-dimensional problem in ``phi``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import DegenerateInput, DofTooSmall, DomainError, NonConvergence

PHI_BOUND = 0.999
PHI_XTOL = 1e-7
NYCHKA_CONSTANT = 0.68


class Ar1Method(str, enum.Enum):
    MAXIMUM_LIKELIHOOD = "maximum_likelihood"
    LAG1_SAMPLE = "lag1_sample"

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        aliases = {"ml": cls.MAXIMUM_LIKELIHOOD, "lag1": cls.LAG1_SAMPLE}
        try:
            return aliases.get(value) or cls(value)
        except ValueError:
            raise DomainError(f"unknown AR1 method {value!r}") from None


@dataclass(frozen=True)
class Ar1Estimate:
    r1: float
    method: Ar1Method

    def __post_init__(self):
        if not abs(self.r1) < 1:
            raise DomainError(f"|r1| must be < 1, got {self.r1}")


@dataclass(frozen=True)
class DofAdjustment:
    n: int
    n_eff: float

    @property
    def se_ratio(self) -> float:
        if self.n_eff <= 2:
            raise DofTooSmall(f"n_eff = {self.n_eff:.4g} <= 2")
        return math.sqrt((self.n - 2) / (self.n_eff - 2))


class _Ar1Likelihood:
    """Profile log-likelihood of phi from a handful of sums over the data."""

    def __init__(self, x):
        x = np.asarray(x, dtype=float)
        x = x - x.mean()
        head, tail = x[:-1], x[1:]
        self.n = x.size
        self.x1 = float(x[0])
        self.sx_head = float(head.sum())
        self.sx_tail = float(tail.sum())
        self.sxx_head = float(np.dot(head, head))
        self.sxx_tail = float(np.dot(tail, tail))
        self.sxy = float(np.dot(head, tail))

    def sum_of_squares(self, phi):
        """Weighted residual sum of squares with mu profiled out."""
        phi = np.asarray(phi, dtype=float)
        n = self.n
        w1 = 1.0 - phi * phi
        k = 1.0 - phi
        su = self.sx_tail - phi * self.sx_head  # sum of u_t = x_t - phi x_{t-1}
        suu = self.sxx_tail - 2.0 * phi * self.sxy + phi * phi * self.sxx_head
        # S(mu) = w1 (x1 - mu)^2 + sum (u_t - k mu)^2, minimized over mu
        a = w1 + (n - 1) * k * k
        b = w1 * self.x1 + k * su
        c = w1 * self.x1 * self.x1 + suu
        return c - b * b / a

    def __call__(self, phi):
        phi = np.asarray(phi, dtype=float)
        s = self.sum_of_squares(phi)
        return -0.5 * self.n * np.log(s / self.n) + 0.5 * np.log1p(-phi * phi)


def ar1_loglik(x, phi):
    """Exact AR(1) log-likelihood at ``phi`` with mean and variance profiled out.

    Additive constants are dropped. ``phi`` may be an array.
    """
    return _Ar1Likelihood(x)(phi)


def _ml_phi(x):
    loglik = _Ar1Likelihood(x)
    grid = np.linspace(-PHI_BOUND, PHI_BOUND, 41)
    values = loglik(grid)
    best = int(np.argmax(values))
    lo = grid[max(best - 1, 0)]
    hi = grid[min(best + 1, grid.size - 1)]
    res = minimize_scalar(
        lambda p: -float(loglik(p)),
        bounds=(lo, hi),
        method="bounded",
        options={"xatol": PHI_XTOL, "maxiter": 500},
    )
    if not res.success or not np.isfinite(res.fun):
        raise NonConvergence("AR1 likelihood maximization failed", bracket=(lo, hi))
    phi = float(res.x)
    # the bounded search never lands exactly on its end points; snap so the
    # grid maximum at the outer bound is not overlooked
    if values[best] > -res.fun:
        phi = float(grid[best])
    return phi


def lag1_autocorrelation(x) -> float:
    x = np.asarray(x, dtype=float)
    d = x - x.mean()
    return float(np.dot(d[:-1], d[1:]) / np.dot(d, d))


def estimate_ar1(residuals, method="maximum_likelihood") -> Ar1Estimate:
    """Lag-1 coefficient of ``residuals``.

    Parameters
    ----------
    residuals : array_like
        At least 8 values, not all equal.
    method : {"maximum_likelihood", "lag1_sample"} or {"ml", "lag1"}
        Exact Gaussian ML with the mean estimated, or the sample lag-1
        autocorrelation ``sum(d_i d_{i+1}) / sum(d_i**2)``.
    """
    method = Ar1Method.parse(method)
    x = np.asarray(residuals, dtype=float)
    if x.size < 8:
        raise DegenerateInput(f"AR1 estimation needs at least 8 values, got {x.size}")
    if not np.all(np.isfinite(x)):
        raise DomainError("residuals must be finite")
    if np.ptp(x) == 0:
        raise DegenerateInput("residuals are constant; AR1 coefficient undefined")
    if method is Ar1Method.LAG1_SAMPLE:
        r = lag1_autocorrelation(x)
    else:
        r = _ml_phi(x)
    return Ar1Estimate(r, method)


def _check_r1(r1):
    if not abs(r1) < 1:
        raise DomainError(f"|r1| must be < 1, got {r1}")


def effective_dof_quenouille(n: int, r1: float) -> float:
    """n (1 - r1) / (1 + r1)."""
    if n < 3:
        raise DomainError(f"n must be >= 3, got {n}")
    _check_r1(r1)
    return n * (1.0 - r1) / (1.0 + r1)


def effective_dof_nychka(n: int, r1: float) -> float:
    """n (1 - r1 - 0.68/sqrt(n)) / (1 + r1 + 0.68/sqrt(n)).

    The 0.68/sqrt(n) small-sample term is taken as given; no derivation of
    the constant is attempted.
    """
    if n < 3:
        raise DomainError(f"n must be >= 3, got {n}")
    _check_r1(r1)
    c = NYCHKA_CONSTANT / math.sqrt(n)
    denom = 1.0 + r1 + c
    if denom <= 0:
        raise DomainError(f"1 + r1 + 0.68/sqrt(n) = {denom} is not positive")
    return n * (1.0 - r1 - c) / denom


NEFF_METHODS = {
    "quenouille": effective_dof_quenouille,
    "nychka": effective_dof_nychka,
}


def effective_dof(n, r1, method="quenouille"):
    try:
        fn = NEFF_METHODS[method]
    except KeyError:
        raise DomainError(f"unknown n_eff method {method!r}") from None
    return fn(n, r1)


def adjust_se(ols_se: float, n: int, n_eff: float) -> float:
    """Inflate an OLS standard error by sqrt((n - 2) / (n_eff - 2))."""
    if n <= 2:
        raise DomainError(f"n must be > 2, got {n}")
    return ols_se * DofAdjustment(n, n_eff).se_ratio
