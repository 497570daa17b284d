"""Daily date-indexed series and datasets with the transforms used everywhere.

Series and Dataset are immutable value objects: every operation returns a
new object, so they are safe to share across threads. Dates are calendar
days (numpy ``datetime64[D]``) with no missing slots inside the stored
range; gaps must be resolved at ingestion (see ``powsec.ingest``).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DataError

DAY = np.timedelta64(1, "D")


def _as_dates(dates) -> np.ndarray:
    arr = np.asarray(dates, dtype="datetime64[D]")
    if arr.ndim != 1:
        raise DataError("dates must be one-dimensional")
    return arr


@dataclass(frozen=True)
class Series:
    """A named daily series: strictly increasing gap-free dates, one value each."""

    name: str
    dates: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        dates = _as_dates(self.dates)
        values = np.asarray(self.values, dtype=np.float64)
        if values.ndim != 1 or dates.size != values.size:
            raise DataError(
                f"series {self.name!r}: dates and values must be 1-d and equally long"
            )
        if dates.size == 0:
            raise DataError(f"series {self.name!r}: empty series")
        steps = np.diff(dates)
        if steps.size and not (steps > np.timedelta64(0, "D")).all():
            raise DataError(f"series {self.name!r}: dates must be strictly increasing")
        if steps.size and not (steps == DAY).all():
            gap_at = dates[np.argmax(steps > DAY)]
            raise DataError(
                f"series {self.name!r}: calendar gap after {gap_at} "
                "(resolve gaps at ingestion, e.g. fill: forward)"
            )
        dates.setflags(write=False)
        values.setflags(write=False)
        object.__setattr__(self, "dates", dates)
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return self.values.size

    def rename(self, name: str) -> "Series":
        return Series(name, self.dates, self.values)

    def with_values(self, values) -> "Series":
        return Series(self.name, self.dates, values)


@dataclass(frozen=True)
class Dataset:
    """Named series sharing one index; column order is construction order."""

    index: np.ndarray
    columns: dict[str, np.ndarray] = field(default_factory=dict)

    def __post_init__(self):
        index = _as_dates(self.index)
        index.setflags(write=False)
        cols = {}
        for name, vals in self.columns.items():
            arr = np.asarray(vals, dtype=np.float64)
            if arr.shape != index.shape:
                raise DataError(f"column {name!r} does not match the shared index")
            arr.setflags(write=False)
            cols[name] = arr
        object.__setattr__(self, "index", index)
        object.__setattr__(self, "columns", cols)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(self.columns)

    @property
    def nobs(self) -> int:
        return self.index.size

    def column(self, name: str) -> np.ndarray:
        try:
            return self.columns[name]
        except KeyError:
            raise DataError(f"no column named {name!r}; have {list(self.columns)}") from None

    def series(self, name: str) -> Series:
        return Series(name, self.index, self.column(name))

    def select(self, names) -> "Dataset":
        return Dataset(self.index, {n: self.column(n) for n in names})


@dataclass(frozen=True)
class ColumnStats:
    name: str
    obs: int
    mean: float
    std: float
    minimum: float
    maximum: float

    def __post_init__(self):
        if not (self.minimum <= self.mean <= self.maximum):
            raise DataError(f"stats for {self.name!r}: min <= mean <= max violated")
        if self.std < 0:
            raise DataError(f"stats for {self.name!r}: negative std")


@dataclass(frozen=True)
class SummaryStats:
    """Per-column Obs/Mean/Std/Min/Max, in dataset column order."""

    columns: tuple[ColumnStats, ...]

    def by_name(self, name: str) -> ColumnStats:
        for col in self.columns:
            if col.name == name:
                return col
        raise DataError(f"no stats for column {name!r}")


def log_transform(s: Series, floor: float = 0.001) -> Series:
    """Natural log of max(value, floor), the transform applied to every variable.

    The default floor 0.001 reproduces the -6.908 minima that flooring
    zeros before logging leaves in competition/electricity series.
    """
    if not floor > 0:
        raise DataError("floor must be positive")
    bad = ~np.isfinite(s.values)
    if bad.any():
        raise DataError(
            f"series {s.name!r}: non-finite value at {s.dates[np.argmax(bad)]}"
        )
    return s.with_values(np.log(np.maximum(s.values, floor)))


def difference(s: Series, order: int = 1) -> Series:
    """Order-th difference; dates are the retained tail."""
    if order < 1:
        raise DataError("difference order must be >= 1")
    if len(s) <= order:
        raise DataError(f"series {s.name!r} too short to difference {order} time(s)")
    return Series(s.name, s.dates[order:], np.diff(s.values, n=order))


def lag(s: Series, k: int) -> Series:
    """Series shifted k days back: value at date t is the original at t-k."""
    if k < 0:
        raise DataError("lag must be non-negative")
    if k >= len(s):
        raise DataError(f"lag {k} >= series length {len(s)}")
    if k == 0:
        return s
    return Series(s.name, s.dates[k:], s.values[: len(s) - k])


def align(columns) -> Dataset:
    """Inner-join series on dates; the index is the ordered intersection."""
    columns = list(columns)
    if not columns:
        raise DataError("align needs at least one series")
    names = [s.name for s in columns]
    if len(set(names)) != len(names):
        dupes = sorted({n for n in names if names.count(n) > 1})
        raise DataError(f"duplicate column names: {dupes}")
    shared = columns[0].dates
    for s in columns[1:]:
        shared = np.intersect1d(shared, s.dates)
    if shared.size == 0:
        raise DataError("date ranges have an empty intersection")
    cols = {}
    for s in columns:
        pos = np.searchsorted(s.dates, shared)
        cols[s.name] = s.values[pos]
    return Dataset(shared, cols)


def describe(d: Dataset) -> SummaryStats:
    """Table of descriptive statistics (sample std, n-1 denominator)."""
    out = []
    for name in d.names:
        vals = d.column(name)
        if vals.size == 0:
            raise DataError(f"column {name!r} is empty")
        if not np.isfinite(vals).all():
            raise DataError(f"column {name!r} contains non-finite values")
        std = float(np.std(vals, ddof=1)) if vals.size > 1 else 0.0
        out.append(
            ColumnStats(
                name=name,
                obs=int(vals.size),
                mean=float(np.mean(vals)),
                std=std,
                minimum=float(np.min(vals)),
                maximum=float(np.max(vals)),
            )
        )
    return SummaryStats(tuple(out))


def date_range(start, periods: int) -> np.ndarray:
    """Contiguous daily index, handy for fixtures and tests."""
    start = np.datetime64(start, "D")
    return start + np.arange(periods) * DAY


def from_values(name: str, values, start="2015-01-01") -> Series:
    values = np.asarray(values, dtype=np.float64)
    return Series(name, date_range(start, values.size), values)
