"""CSV ingestion and construction of the derived mining variables.

Sources are plain CSV files (header row, comma delimiter, '.' decimal
point) with one date column and one value column each. Recipes turn
loaded sources into the model variables: per-block reward, competition
intensity, and the concentration indices, each optionally log-transformed
before entering the dataset.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from datetime import datetime
from pathlib import Path

import numpy as np

from .errors import DataError, IngestError
from .timeseries import DAY, Dataset, Series, align, log_transform

FORMULAS = ("raw", "reward_per_block", "competition_intensity", "hhi", "hhi_normalised")
FILL_POLICIES = ("none", "forward")


@dataclass(frozen=True)
class SourceSpec:
    """One raw data source: where it lives and how to read it."""

    name: str
    path: str
    date_column: str
    value_column: str
    date_format: str = "%Y-%m-%d"
    unit: str = ""
    fill: str = "none"

    def __post_init__(self):
        if self.fill not in FILL_POLICIES:
            raise IngestError(f"source {self.name!r}: fill must be one of {FILL_POLICIES}")


@dataclass(frozen=True)
class VariableRecipe:
    """A derived variable: formula tag plus the source names it consumes."""

    name: str
    formula: str
    inputs: tuple[str, ...]
    log: bool = True

    def __post_init__(self):
        if self.formula not in FORMULAS:
            raise IngestError(f"variable {self.name!r}: unknown formula {self.formula!r}")
        object.__setattr__(self, "inputs", tuple(self.inputs))
        if not self.inputs:
            raise IngestError(f"variable {self.name!r}: needs at least one input")


def load_csv(spec: SourceSpec) -> Series:
    """Load one source into a Series: parsed, sorted, gap-checked/filled."""
    path = Path(spec.path)
    try:
        handle = open(path, newline="", encoding="utf-8")
    except OSError as exc:
        raise IngestError(f"source {spec.name!r}: cannot open {path}: {exc}") from exc
    rows: dict[np.datetime64, float] = {}
    with handle:
        reader = csv.DictReader(handle)
        header = reader.fieldnames or []
        for col in (spec.date_column, spec.value_column):
            if col not in header:
                raise IngestError(
                    f"source {spec.name!r}: column {col!r} not in header {header} of {path}"
                )
        for lineno, row in enumerate(reader, start=2):
            raw_date = (row[spec.date_column] or "").strip()
            raw_value = (row[spec.value_column] or "").strip()
            try:
                day = np.datetime64(
                    datetime.strptime(raw_date, spec.date_format).date(), "D"
                )
            except ValueError as exc:
                raise IngestError(
                    f"source {spec.name!r}: unparsable date {raw_date!r} "
                    f"at {path}:{lineno}"
                ) from exc
            try:
                value = float(raw_value)
            except ValueError as exc:
                raise IngestError(
                    f"source {spec.name!r}: unparsable number {raw_value!r} "
                    f"at {path}:{lineno}"
                ) from exc
            if not np.isfinite(value):
                raise IngestError(
                    f"source {spec.name!r}: non-finite value {raw_value!r} "
                    f"at {path}:{lineno}"
                )
            if day in rows:
                raise IngestError(f"source {spec.name!r}: duplicate date {day}")
            rows[day] = value
    if not rows:
        raise IngestError(f"source {spec.name!r}: no data rows in {path}")
    dates = np.array(sorted(rows), dtype="datetime64[D]")
    values = np.array([rows[d] for d in dates], dtype=np.float64)
    if spec.fill == "forward":
        dates, values = _forward_fill(dates, values)
    else:
        gaps = np.diff(dates) > DAY
        if gaps.any():
            raise IngestError(
                f"source {spec.name!r}: calendar gap after {dates[np.argmax(gaps)]}; "
                "set fill: forward to carry the last observation"
            )
    return Series(spec.name, dates, values)


def _forward_fill(dates, values):
    """Reindex to the full daily range, carrying the last observation forward."""
    full = np.arange(dates[0], dates[-1] + DAY, DAY)
    pos = np.searchsorted(dates, full, side="right") - 1
    return full, values[pos]


def reward_per_block(reward_usd_daily: Series, blocks_daily: Series) -> Series:
    """Average fiat reward per block: daily total reward / daily block count."""
    joined = align([reward_usd_daily, blocks_daily])
    reward = joined.column(reward_usd_daily.name)
    blocks = joined.column(blocks_daily.name)
    if (blocks <= 0).any():
        bad = joined.index[np.argmax(blocks <= 0)]
        raise DataError(f"non-positive block count at {bad}")
    return Series(reward_usd_daily.name, joined.index, reward / blocks)


def competition_intensity(n_miners: Series) -> Series:
    """Contest-competition term (n-1)/n^2, highest at n=2."""
    n = n_miners.values
    if (n < 1).any():
        bad = n_miners.dates[np.argmax(n < 1)]
        raise DataError(f"miner count below 1 at {bad}")
    return n_miners.with_values((n - 1.0) / (n * n))


def _check_shares(shares) -> np.ndarray:
    shares = np.asarray(shares, dtype=np.float64)
    if shares.ndim != 1 or shares.size == 0:
        raise DataError("shares must be a non-empty vector")
    if (shares < 0).any():
        raise DataError("negative share")
    total = float(shares.sum())
    if abs(total - 1.0) > 1e-9:
        raise DataError(f"shares sum to {total!r}, not 1")
    return shares


def hhi(shares) -> float:
    """Herfindahl-Hirschman index: sum of squared shares."""
    shares = _check_shares(shares)
    return float(shares @ shares)


def hhi_normalised(shares) -> float:
    """HHI rescaled to [0, 1]: (H - 1/n) / (1 - 1/n); undefined for n=1."""
    shares = _check_shares(shares)
    n = shares.size
    if n < 2:
        raise DataError("normalised HHI is degenerate for a single participant")
    h = float(shares @ shares)
    return (h - 1.0 / n) / (1.0 - 1.0 / n)


def _recipe_series(recipe: VariableRecipe, sources: dict[str, Series]) -> Series:
    inputs = []
    for name in recipe.inputs:
        if name not in sources:
            raise IngestError(f"variable {recipe.name!r}: unknown input {name!r}")
        inputs.append(sources[name])
    if recipe.formula == "raw":
        return inputs[0].rename(recipe.name)
    if recipe.formula == "reward_per_block":
        if len(inputs) != 2:
            raise IngestError(f"variable {recipe.name!r}: reward_per_block needs 2 inputs")
        return reward_per_block(inputs[0], inputs[1]).rename(recipe.name)
    if recipe.formula == "competition_intensity":
        return competition_intensity(inputs[0]).rename(recipe.name)
    # Concentration indices: with per-pool share columns use them directly,
    # with only a miner-count series fall back to equal shares (H = 1/n).
    if len(inputs) == 1:
        n = inputs[0].values
        if (n < 1).any():
            bad = inputs[0].dates[np.argmax(n < 1)]
            raise DataError(f"variable {recipe.name!r}: miner count below 1 at {bad}")
        if recipe.formula == "hhi":
            return Series(recipe.name, inputs[0].dates, 1.0 / n)
        if (n < 2).any():
            bad = inputs[0].dates[np.argmax(n < 2)]
            raise DataError(
                f"variable {recipe.name!r}: normalised HHI degenerate (n=1) at {bad}"
            )
        return Series(recipe.name, inputs[0].dates, np.zeros_like(n))
    joined = align(inputs)
    shares_matrix = np.column_stack([joined.column(s.name) for s in inputs])
    fn = hhi if recipe.formula == "hhi" else hhi_normalised
    values = np.empty(joined.nobs)
    for i in range(joined.nobs):
        try:
            values[i] = fn(shares_matrix[i])
        except DataError as exc:
            raise DataError(f"variable {recipe.name!r} at {joined.index[i]}: {exc}") from exc
    return Series(recipe.name, joined.index, values)


def build_dataset(
    sources: dict[str, Series],
    recipes,
    log_floor: float = 0.001,
) -> Dataset:
    """Evaluate recipes against loaded sources and align into one dataset."""
    recipes = list(recipes)
    names = [r.name for r in recipes]
    if len(set(names)) != len(names):
        dupes = sorted({n for n in names if names.count(n) > 1})
        raise IngestError(f"duplicate variable names: {dupes}")
    out = []
    for recipe in recipes:
        series = _recipe_series(recipe, sources)
        if recipe.log:
            series = log_transform(series, floor=log_floor)
        out.append(series)
    return align(out)


def load_sources(specs) -> dict[str, Series]:
    """Load every source spec; order preserved, names must be unique."""
    loaded: dict[str, Series] = {}
    for spec in specs:
        if spec.name in loaded:
            raise IngestError(f"duplicate source name {spec.name!r}")
        loaded[spec.name] = load_csv(spec)
    return loaded
