"""YAML study configs and the dataset CSV wire format.

One config file drives a whole run. Keys are validated strictly
(unknown keys are rejected) and relative paths resolve against the
config file's directory so fixtures stay relocatable. The dataset CSV
has a `date` column (ISO days) plus one column per variable, written
with full float precision.
"""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np
import yaml

from .ardl import ArdlSpec
from .attack import AttackScenario
from .errors import ConfigError, IngestError
from .ingest import SourceSpec, VariableRecipe
from .mining import MarketState, MinerParams
from .timeseries import Dataset

SIMULATE_AXES = (
    "gamma",
    "n_miners",
    "expected_price",
    "reward_btc",
    "variable_cost",
    "discount_rate",
    "depreciation",
    "equipment_price",
    "fixed_cost",
)


def load_yaml(path) -> dict:
    path = Path(path)
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = yaml.safe_load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except yaml.YAMLError as exc:
        raise ConfigError(f"invalid YAML in {path}: {exc}") from exc
    if not isinstance(doc, dict):
        raise ConfigError(f"config {path} must be a mapping at the top level")
    return doc


def _require_keys(doc: dict, allowed: set[str], required: set[str], where: str) -> None:
    unknown = set(doc) - allowed
    if unknown:
        raise ConfigError(f"{where}: unknown keys {sorted(unknown)}")
    missing = required - set(doc)
    if missing:
        raise ConfigError(f"{where}: missing keys {sorted(missing)}")


def _resolve(path, base: Path) -> str:
    p = Path(path)
    return str(p if p.is_absolute() else base / p)


class IngestConfig:
    def __init__(self, sources, recipes, log_floor: float):
        self.sources = sources
        self.recipes = recipes
        self.log_floor = log_floor


def parse_ingest_config(path) -> IngestConfig:
    base = Path(path).parent
    doc = load_yaml(path)
    _require_keys(doc, {"sources", "variables", "log_floor"}, {"sources", "variables"}, str(path))
    if not isinstance(doc["sources"], dict) or not doc["sources"]:
        raise ConfigError("sources must be a non-empty mapping of name -> spec")
    sources = []
    for name, spec in doc["sources"].items():
        if not isinstance(spec, dict):
            raise ConfigError(f"source {name!r} must be a mapping")
        _require_keys(
            spec,
            {"path", "date_column", "value_column", "date_format", "unit", "fill"},
            {"path", "date_column", "value_column"},
            f"source {name!r}",
        )
        sources.append(
            SourceSpec(
                name=name,
                path=_resolve(spec["path"], base),
                date_column=spec["date_column"],
                value_column=spec["value_column"],
                date_format=spec.get("date_format", "%Y-%m-%d"),
                unit=spec.get("unit", ""),
                fill=spec.get("fill", "none"),
            )
        )
    if not isinstance(doc["variables"], list) or not doc["variables"]:
        raise ConfigError("variables must be a non-empty list")
    recipes = []
    for entry in doc["variables"]:
        if not isinstance(entry, dict):
            raise ConfigError("each variable must be a mapping")
        _require_keys(entry, {"name", "formula", "inputs", "log"}, {"name", "formula", "inputs"}, "variable")
        recipes.append(
            VariableRecipe(
                name=entry["name"],
                formula=entry["formula"],
                inputs=tuple(entry["inputs"]),
                log=bool(entry.get("log", True)),
            )
        )
    floor = float(doc.get("log_floor", 0.001))
    return IngestConfig(sources, recipes, floor)


class AnalyzeConfig:
    def __init__(self, dataset_path, models, bounds_level, diagnostics_lags, pretest_det):
        self.dataset_path = dataset_path
        self.models = models
        self.bounds_level = bounds_level
        self.diagnostics_lags = diagnostics_lags
        self.pretest_det = pretest_det


def parse_analyze_config(path) -> AnalyzeConfig:
    base = Path(path).parent
    doc = load_yaml(path)
    _require_keys(
        doc,
        {"dataset", "models", "bounds_level", "diagnostics_lags", "pretest_det"},
        {"dataset", "models"},
        str(path),
    )
    if not isinstance(doc["models"], list) or not doc["models"]:
        raise ConfigError("models must be a non-empty list")
    models = []
    for i, entry in enumerate(doc["models"]):
        if not isinstance(entry, dict):
            raise ConfigError("each model must be a mapping")
        _require_keys(
            entry,
            {"name", "dependent", "regressors", "max_g", "max_z"},
            {"dependent", "regressors"},
            f"model #{i + 1}",
        )
        models.append(
            ArdlSpec(
                dependent=entry["dependent"],
                regressors=tuple(entry["regressors"]),
                max_g=int(entry.get("max_g", 7)),
                max_z=int(entry.get("max_z", 7)),
                name=entry.get("name", f"model{i + 1}"),
            )
        )
    names = [m.name for m in models]
    if len(set(names)) != len(names):
        raise ConfigError("model names must be unique")
    return AnalyzeConfig(
        dataset_path=_resolve(doc["dataset"], base),
        models=models,
        bounds_level=doc.get("bounds_level", "5%"),
        diagnostics_lags=int(doc.get("diagnostics_lags", 7)),
        pretest_det=doc.get("pretest_det", "constant"),
    )


class SimulateConfig:
    def __init__(self, grid: dict, free_entry: bool, equipment_efficiency):
        self.grid = grid
        self.free_entry = free_entry
        self.equipment_efficiency = equipment_efficiency


def parse_simulate_config(path) -> SimulateConfig:
    doc = load_yaml(path)
    _require_keys(doc, {"grid", "free_entry", "equipment_efficiency"}, {"grid"}, str(path))
    grid = doc["grid"]
    if not isinstance(grid, dict):
        raise ConfigError("grid must be a mapping of parameter -> list of values")
    _require_keys(grid, set(SIMULATE_AXES), set(SIMULATE_AXES) - {"fixed_cost"}, "grid")
    axes = {}
    for key in SIMULATE_AXES:
        values = grid.get(key, [0.0] if key == "fixed_cost" else None)
        if values is None:
            raise ConfigError(f"grid: missing axis {key!r}")
        if not isinstance(values, list) or not values:
            raise ConfigError(f"grid axis {key!r} must be a non-empty list")
        axes[key] = [float(v) for v in values]
    if any(len(v) == 0 for v in axes.values()):
        raise ConfigError("grid axes must be non-empty")
    return SimulateConfig(
        grid=axes,
        free_entry=bool(doc.get("free_entry", False)),
        equipment_efficiency=doc.get("equipment_efficiency"),
    )


class AttackConfig:
    def __init__(self, params, market, scenarios, min_deterrence, cost_form):
        self.params = params
        self.market = market
        self.scenarios = scenarios
        self.min_deterrence = min_deterrence
        self.cost_form = cost_form


def parse_attack_config(path) -> AttackConfig:
    doc = load_yaml(path)
    _require_keys(
        doc,
        {"params", "market", "scenarios", "min_deterrence", "cost_form"},
        {"params", "market", "scenarios"},
        str(path),
    )
    p = doc["params"]
    _require_keys(
        p,
        {"gamma", "variable_cost", "discount_rate", "depreciation", "equipment_price",
         "fixed_cost", "equipment_efficiency"},
        {"gamma", "variable_cost", "discount_rate", "depreciation", "equipment_price"},
        "params",
    )
    params = MinerParams(
        gamma=float(p["gamma"]),
        variable_cost=float(p["variable_cost"]),
        discount_rate=float(p["discount_rate"]),
        depreciation=float(p["depreciation"]),
        equipment_price=float(p["equipment_price"]),
        fixed_cost=float(p.get("fixed_cost", 0.0)),
        equipment_efficiency=p.get("equipment_efficiency"),
    )
    m = doc["market"]
    _require_keys(m, {"expected_price", "reward_btc", "n_miners"},
                  {"expected_price", "reward_btc", "n_miners"}, "market")
    market = MarketState(
        expected_price=float(m["expected_price"]),
        reward_btc=float(m["reward_btc"]),
        n_miners=float(m["n_miners"]),
    )
    if not isinstance(doc["scenarios"], list) or not doc["scenarios"]:
        raise ConfigError("scenarios must be a non-empty list")
    scenarios = []
    for i, entry in enumerate(doc["scenarios"]):
        _require_keys(
            entry,
            {"label", "power_multiple", "duration_blocks", "recovery_share",
             "price_drop", "payoff", "double_spend_btc"},
            {"power_multiple", "duration_blocks", "recovery_share", "price_drop"},
            f"scenario #{i + 1}",
        )
        scenarios.append(
            AttackScenario(
                power_multiple=float(entry["power_multiple"]),
                duration_blocks=float(entry["duration_blocks"]),
                recovery_share=float(entry["recovery_share"]),
                price_drop=float(entry["price_drop"]),
                payoff=None if entry.get("payoff") is None else float(entry["payoff"]),
                double_spend_btc=(
                    None if entry.get("double_spend_btc") is None
                    else float(entry["double_spend_btc"])
                ),
                label=entry.get("label", f"scenario{i + 1}"),
            )
        )
    cost_form = doc.get("cost_form", "eq13")
    if cost_form not in ("eq13", "prose"):
        raise ConfigError("cost_form must be 'eq13' or 'prose'")
    return AttackConfig(params, market, scenarios, bool(doc.get("min_deterrence", False)), cost_form)


def write_dataset_csv(dataset: Dataset, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["date", *dataset.names])
        for i, day in enumerate(dataset.index):
            writer.writerow([str(day)] + [repr(float(dataset.column(n)[i])) for n in dataset.names])


def read_dataset_csv(path) -> Dataset:
    path = Path(path)
    try:
        fh = open(path, newline="", encoding="utf-8")
    except OSError as exc:
        raise IngestError(f"cannot open dataset {path}: {exc}") from exc
    with fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if not header or header[0] != "date" or len(header) < 2:
            raise IngestError(f"dataset {path}: expected header 'date,<columns...>'")
        names = header[1:]
        dates, rows = [], []
        for lineno, row in enumerate(reader, start=2):
            if len(row) != len(header):
                raise IngestError(f"dataset {path}:{lineno}: ragged row")
            try:
                dates.append(np.datetime64(row[0], "D"))
                rows.append([float(v) for v in row[1:]])
            except ValueError as exc:
                raise IngestError(f"dataset {path}:{lineno}: {exc}") from exc
    if not rows:
        raise IngestError(f"dataset {path}: no data rows")
    matrix = np.asarray(rows, dtype=np.float64)
    return Dataset(np.asarray(dates), {n: matrix[:, j] for j, n in enumerate(names)})
