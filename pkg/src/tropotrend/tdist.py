"""Student-t distribution for real-valued degrees of freedom.

The CDF goes through the regularized incomplete beta function, evaluated by
its continued fraction (modified Lentz). The quantile is found by bisection.
"""

from __future__ import annotations

import math
from statistics import NormalDist

from .errors import DomainError, NonConvergence

_EPS = 1e-16
_TINY = 1e-300
_MAX_CF_TERMS = 20000
_MAX_BISECT = 200


def _betacf(a, b, x):
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _TINY:
        d = _TINY
    d = 1.0 / d
    h = d
    for m in range(1, _MAX_CF_TERMS + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            return h
    raise NonConvergence(f"incomplete beta continued fraction, a={a}, b={b}, x={x}")


def betainc_reg(a: float, b: float, x: float, xc: float | None = None) -> float:
    """Regularized incomplete beta I_x(a, b).

    ``xc`` may carry ``1 - x`` computed without cancellation by the caller.
    """
    if a <= 0 or b <= 0:
        raise DomainError("betainc_reg needs a > 0 and b > 0")
    if xc is None:
        xc = 1.0 - x
    if x < 0 or xc < 0:
        raise DomainError(f"betainc_reg argument {x} outside [0, 1]")
    if x == 0:
        return 0.0
    if xc == 0:
        return 1.0
    log_front = (
        math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b) + a * math.log(x) + b * math.log(xc)
    )
    front = math.exp(log_front)
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _betacf(a, b, x) / a
    return 1.0 - front * _betacf(b, a, xc) / b


def _upper_tail(x, df):
    """P(T > x) for x >= 0."""
    x2 = x * x
    denom = df + x2
    return 0.5 * betainc_reg(df / 2.0, 0.5, df / denom, x2 / denom)


def t_cdf(x: float, df: float) -> float:
    """P(T <= x) for a Student-t with ``df`` (real, > 0) degrees of freedom."""
    if not df > 0:
        raise DomainError(f"degrees of freedom must be > 0, got {df}")
    if math.isnan(x):
        return math.nan
    if x == 0:
        return 0.5
    if math.isinf(x):
        return 1.0 if x > 0 else 0.0
    if x > 0:
        return 1.0 - _upper_tail(x, df)
    return _upper_tail(-x, df)


def t_sf(x: float, df: float) -> float:
    """P(T > x), accurate in the far upper tail."""
    return t_cdf(-x, df)


def t_quantile(p: float, df: float) -> float:
    """Inverse of :func:`t_cdf`.

    Bisection from a bracket around the normal quantile, widened until it
    straddles ``p``. Gives up with :class:`NonConvergence` after 200 halvings.
    """
    if not df > 0:
        raise DomainError(f"degrees of freedom must be > 0, got {df}")
    if not 0 < p < 1:
        raise DomainError(f"probability must lie in (0, 1), got {p}")
    if p == 0.5:
        return 0.0
    if p > 0.5:
        # 1 - p is exact here, and the lower tail is computed without cancellation
        return -t_quantile(1.0 - p, df)

    z = NormalDist().inv_cdf(p)
    lo, hi = 2.0 * z - 1.0, min(0.0, 0.5 * z)
    width = hi - lo
    while t_cdf(lo, df) > p:
        width *= 2.0
        lo = hi - width
        if not math.isfinite(lo):
            raise NonConvergence(f"no lower bracket for p={p}, df={df}")

    for _ in range(_MAX_BISECT):
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi or hi - lo <= 1e-15 * abs(mid):
            return mid
        fm = t_cdf(mid, df)
        if fm == p:
            return mid
        if fm < p:
            lo = mid
        else:
            hi = mid
    raise NonConvergence(f"t_quantile(p={p}, df={df}) did not converge", bracket=(lo, hi))
