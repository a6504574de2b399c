"""Monthly series, calendar windows and the centered decadal time axis."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, RangeError

MONTHS_PER_DECADE = 120


@dataclass(frozen=True)
class MonthlySeries:
    """Monthly anomaly values anchored at (start_year, start_month).

    Sample ``i`` sits at decimal time ``start_year + (start_month - 1 + i) / 12``.
    The values are stored as a read-only float array.
    """

    start_year: int
    start_month: int
    values: np.ndarray
    label: str = ""

    def __post_init__(self):
        if not 1 <= int(self.start_month) <= 12:
            raise DomainError(f"start_month must be in 1..12, got {self.start_month}")
        values = np.array(self.values, dtype=float).reshape(-1)
        if values.size == 0:
            raise DomainError("a series needs at least one value")
        if not np.all(np.isfinite(values)):
            bad = int(np.flatnonzero(~np.isfinite(values))[0])
            raise DomainError(f"non-finite value at index {bad}")
        values.setflags(write=False)
        object.__setattr__(self, "start_year", int(self.start_year))
        object.__setattr__(self, "start_month", int(self.start_month))
        object.__setattr__(self, "values", values)

    def __len__(self):
        return self.values.size

    @property
    def start_index(self) -> int:
        """Absolute month count (year * 12 + month - 1) of the first sample."""
        return self.start_year * 12 + self.start_month - 1

    @property
    def end_year(self) -> int:
        return (self.start_index + len(self) - 1) // 12

    @property
    def end_month(self) -> int:
        return (self.start_index + len(self) - 1) % 12 + 1

    def times(self) -> np.ndarray:
        """Decimal-year time stamps, computed from integer month counts."""
        return (self.start_index + np.arange(len(self))) / 12.0

    def __eq__(self, other):
        if not isinstance(other, MonthlySeries):
            return NotImplemented
        return (
            self.start_year == other.start_year
            and self.start_month == other.start_month
            and self.label == other.label
            and np.array_equal(self.values, other.values)
        )

    __hash__ = None


@dataclass(frozen=True)
class TimeAxis:
    t: np.ndarray = field(repr=False)

    @property
    def ssx(self) -> float:
        return float(np.dot(self.t, self.t))

    def __len__(self):
        return self.t.size


def window(series: MonthlySeries, start_year: int, end_year: int) -> MonthlySeries:
    """Cut January ``start_year`` through December ``end_year`` out of ``series``.

    Raises
    ------
    RangeError
        If the window is inverted or reaches outside the data.
    """
    if start_year > end_year:
        raise RangeError(f"start_year {start_year} is after end_year {end_year}")
    first = start_year * 12 - series.start_index
    last = end_year * 12 + 11 - series.start_index
    if first < 0 or last >= len(series):
        raise RangeError(
            f"window {start_year}-01..{end_year}-12 not covered by {series.label or 'series'} "
            f"({series.start_year}-{series.start_month:02d}..{series.end_year}-{series.end_month:02d})"
        )
    return MonthlySeries(start_year, 1, series.values[first : last + 1], series.label)


def centered_decadal_time(series: MonthlySeries) -> TimeAxis:
    """Time in decades, centered on the window mean.

    For equally spaced monthly data the mean sits at index (n - 1) / 2, so the
    axis is built from integer offsets and never touches calendar values.
    """
    n = len(series)
    if n == 0:
        raise DomainError("empty series")
    offsets = 2.0 * np.arange(n) - (n - 1)
    t = offsets / (2.0 * MONTHS_PER_DECADE)
    t.setflags(write=False)
    return TimeAxis(t)


def month_index_from_decimal(year: float) -> int:
    """Map a decimal year such as 1979.0833 to an absolute month count."""
    idx = year * 12.0
    rounded = round(idx)
    if not math.isclose(idx, rounded, abs_tol=0.02):
        raise ValueError(f"{year!r} is not on a monthly grid")
    return int(rounded)
