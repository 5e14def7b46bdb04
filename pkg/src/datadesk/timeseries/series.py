"""Equally spaced time series: construction from tables and differencing.

A series has a start (year, period) and a frequency of 1 (annual),
4 (quarterly) or 12 (monthly).  Missing values inside a series are a hard
error: every downstream formula assumes completeness.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from datetime import date

from ..errors import (
    DuplicateTimestampError,
    GapInSeriesError,
    InvalidSpecError,
    MissingValueInSeriesError,
    NonNumericColumnError,
    SeriesTooShortError,
)
from ..table import Table

FREQUENCIES = (1, 4, 12)


@dataclass(frozen=True)
class TimeSeries:
    values: tuple
    start_year: int
    start_period: int
    frequency: int

    def __post_init__(self):
        if self.frequency not in FREQUENCIES:
            raise InvalidSpecError(
                f"frequency must be one of {FREQUENCIES}, got {self.frequency}"
            )
        if not 1 <= self.start_period <= self.frequency:
            raise InvalidSpecError(
                f"start_period {self.start_period} outside [1, {self.frequency}]"
            )
        if len(self.values) < 1:
            raise SeriesTooShortError("series must have at least one value")
        for v in self.values:
            if not isinstance(v, float) or not math.isfinite(v):
                raise MissingValueInSeriesError(
                    "series values must be finite reals"
                )

    def __len__(self) -> int:
        return len(self.values)

    def time_label(self, i: int) -> str:
        year, period = advance(self.start_year, self.start_period,
                               self.frequency, i)
        if self.frequency == 1:
            return str(year)
        if self.frequency == 4:
            return f"{year} Q{period}"
        return f"{year}-{period:02d}"

    def time_labels(self) -> list:
        return [self.time_label(i) for i in range(len(self.values))]


def advance(year: int, period: int, frequency: int, steps: int):
    """Advance (year, period) by steps whole periods."""
    total = (year * frequency) + (period - 1) + steps
    return total // frequency, total % frequency + 1


def _index_of(year: int, period: int, frequency: int) -> int:
    return year * frequency + (period - 1)


def _label(year: int, period: int, frequency: int) -> str:
    if frequency == 1:
        return str(year)
    if frequency == 4:
        return f"{year} Q{period}"
    return f"{year}-{period:02d}"


def _check_regular(points, frequency: int):
    """points: list of ((year, period), value) — sort, reject gaps/dups."""
    points = sorted(points, key=lambda p: _index_of(*p[0], frequency))
    indices = [_index_of(*p[0], frequency) for p in points]
    for prev, cur, pt in zip(indices, indices[1:], points[1:]):
        if cur == prev:
            raise DuplicateTimestampError(_label(*pt[0], frequency))
        if cur != prev + 1:
            year, period = divmod(prev + 1, frequency)
            raise GapInSeriesError(_label(year, period + 1, frequency))
    (y0, p0), _ = points[0]
    return TimeSeries(tuple(float(v) for _, v in points), y0, p0, frequency)


def _numeric_values(table: Table, value_col: str) -> list:
    col = table.column(value_col)
    if not col.is_numeric:
        raise NonNumericColumnError(f"{value_col!r} is {col.dtype}")
    out = []
    for v in col.cells:
        if v is None:
            raise MissingValueInSeriesError(
                f"missing value in column {value_col!r}"
            )
        out.append(float(v))
    return out


def build_series(table: Table, value_col: str, time_spec: dict) -> TimeSeries:
    """Build a TimeSeries from a table column plus a time layout.

    time_spec is one of:
      {"date_col": name}                      — frequency inferred from step
      {"year_col": name, "period_col": name, "frequency"?: f}
      {"year_col": name}                      — annual
      {"start_year": y, "start_period": p, "frequency": f} — row order
    """
    values = _numeric_values(table, value_col)
    if not values:
        raise SeriesTooShortError("no observations")

    if "date_col" in time_spec:
        return _from_dates(table, time_spec["date_col"], values)
    if "year_col" in time_spec:
        years = _int_column(table, time_spec["year_col"])
        if "period_col" in time_spec:
            periods = _int_column(table, time_spec["period_col"])
            freq = time_spec.get("frequency")
            return _from_year_period(years, periods, values, freq)
        points = [((y, 1), v) for y, v in zip(years, values)]
        return _check_regular(points, 1)
    if "start_year" in time_spec:
        freq = int(time_spec.get("frequency", 1))
        period = int(time_spec.get("start_period", 1))
        return TimeSeries(tuple(values), int(time_spec["start_year"]),
                          period, freq)
    raise InvalidSpecError(f"unrecognized time spec: {time_spec!r}")


def _int_column(table: Table, name: str) -> list:
    col = table.column(name)
    if col.dtype != "integer":
        raise NonNumericColumnError(f"{name!r} must be an integer column")
    out = []
    for v in col.cells:
        if v is None:
            raise MissingValueInSeriesError(f"missing value in {name!r}")
        out.append(int(v))
    return out


def _from_dates(table: Table, date_col: str, values: list) -> TimeSeries:
    col = table.column(date_col)
    if col.dtype != "date":
        raise NonNumericColumnError(f"{date_col!r} must be a date column")
    stamps = []
    for v in col.cells:
        if v is None:
            raise MissingValueInSeriesError(f"missing value in {date_col!r}")
        stamps.append(v)
    months = sorted(set(d.year * 12 + (d.month - 1) for d in stamps))
    if len(months) != len(stamps):
        dup = _first_duplicate(stamps)
        raise DuplicateTimestampError(dup.isoformat())
    steps = {b - a for a, b in zip(months, months[1:])}
    if len(stamps) == 1 or steps == {1}:
        freq, per_step = 12, 1
    elif steps == {3}:
        freq, per_step = 4, 3
    elif steps == {12}:
        freq, per_step = 1, 12
    else:
        # Irregular spacing: report the first missing monthly stamp.
        raise _gap_from_months(months, steps)
    points = []
    for d, v in sorted(zip(stamps, values), key=lambda p: p[0]):
        period = (d.month - 1) // per_step + 1
        points.append(((d.year, period), v))
    return _check_regular(points, freq)


def _first_duplicate(stamps: list) -> date:
    seen = set()
    for d in stamps:
        key = (d.year, d.month)
        if key in seen:
            return d
        seen.add(key)
    return stamps[-1]


def _gap_from_months(months: list, steps: set) -> GapInSeriesError:
    step = min(steps)
    for a, b in zip(months, months[1:]):
        if b - a != step:
            missing = a + step
            return GapInSeriesError(f"{missing // 12:04d}-{missing % 12 + 1:02d}")
    return GapInSeriesError("unknown")


def _from_year_period(years, periods, values, freq) -> TimeSeries:
    if freq is not None:
        freq = int(freq)
        points = [((y, p), v) for y, p, v in zip(years, periods, values)]
        return _check_regular(points, freq)
    # Infer: try monthly, then quarterly.
    for candidate in (12, 4):
        if all(1 <= p <= candidate for p in periods):
            try:
                points = [((y, p), v)
                          for y, p, v in zip(years, periods, values)]
                return _check_regular(points, candidate)
            except GapInSeriesError:
                if candidate == 4:
                    raise
    raise InvalidSpecError("period values outside any supported frequency")


def diff_values(values, lag: int = 1, order: int = 1) -> list:
    """order-fold application of y_t = x_t - x_{t-lag}."""
    out = list(values)
    for _ in range(order):
        if len(out) <= lag:
            raise SeriesTooShortError(
                f"need more than {lag} values to difference"
            )
        out = [out[t] - out[t - lag] for t in range(lag, len(out))]
    return out


def difference(series: TimeSeries, lag: int = 1, order: int = 1) -> TimeSeries:
    """Difference a series; start time advances by lag * order periods."""
    if lag < 1 or order < 1:
        raise InvalidSpecError("lag and order must be >= 1")
    values = diff_values(series.values, lag, order)
    year, period = advance(series.start_year, series.start_period,
                           series.frequency, lag * order)
    return TimeSeries(tuple(values), year, period, series.frequency)
