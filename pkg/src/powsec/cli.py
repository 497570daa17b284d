"""Command-line front end: `powsec <ingest|analyze|simulate|attack>`.

Every subcommand reads one YAML config and writes its outputs
atomically (temp file + rename) into --out (default from POWSEC_OUT_DIR
or ./powsec_out). With a fixed --seed and fixed inputs the
machine-readable outputs are byte-identical across runs; nothing
time-dependent is ever written.

Exit codes: 0 success, 1 usage/config, 2 data/ingest, 3 numeric/solver,
4 pretest refusal.
"""

from __future__ import annotations

import argparse
import hashlib
import itertools
import json
import logging
import math
import os
import sys
import tempfile
from pathlib import Path

from . import __version__, attack as attack_mod, mining, report
from .ardl import run_pipeline
from .configfile import (
    SIMULATE_AXES,
    parse_analyze_config,
    parse_attack_config,
    parse_ingest_config,
    parse_simulate_config,
    read_dataset_csv,
    write_dataset_csv,
)
from .errors import (
    ConfigError,
    DataError,
    NumericError,
    PowsecError,
    PretestRefusalError,
)
from .ingest import build_dataset, load_sources

log = logging.getLogger("powsec")

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_NUMERIC = 3
EXIT_PRETEST = 4

FORMATS = ("text", "csv", "json")


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage errors map to exit code 1
        self.print_usage(sys.stderr)
        raise SystemExit(EXIT_USAGE)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="powsec", description=__doc__)
    parser.add_argument("--version", action="version", version=f"powsec {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn, help_text in (
        ("ingest", cmd_ingest, "load CSV sources and build the aligned dataset"),
        ("analyze", cmd_analyze, "unit-root pretests and the ARDL/bounds/ECM pipeline"),
        ("simulate", cmd_simulate, "mining-equilibrium grid evaluation"),
        ("attack", cmd_attack, "attack-deterrence verdicts over scenarios"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", required=True, help="YAML config file")
        p.add_argument(
            "--out",
            default=os.environ.get("POWSEC_OUT_DIR", "powsec_out"),
            help="output directory (default: $POWSEC_OUT_DIR or ./powsec_out)",
        )
        p.add_argument(
            "--format",
            default="text,csv,json",
            help="comma-separated subset of text,csv,json",
        )
        p.add_argument("--seed", type=int, default=0, help="seed for any Monte Carlo work")
        p.add_argument("-v", "--verbose", action="count", default=0)
        p.set_defaults(fn=fn)
    return parser


def _formats(arg: str) -> set[str]:
    chosen = {part.strip() for part in arg.split(",") if part.strip()}
    bad = chosen - set(FORMATS)
    if bad:
        raise ConfigError(f"unknown output formats: {sorted(bad)}")
    if not chosen:
        raise ConfigError("at least one output format is required")
    return chosen


def _outdir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _atomic_write(path: Path, content: str) -> None:
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(content)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _csv_text(header, rows) -> str:
    lines = [",".join(str(h) for h in header)]
    for row in rows:
        lines.append(",".join("" if v is None else str(v) for v in row))
    return "\n".join(lines) + "\n"


def _sha256(path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            digest.update(chunk)
    return digest.hexdigest()


def cmd_ingest(args) -> int:
    cfg = parse_ingest_config(args.config)
    out = _outdir(args)
    sources = load_sources(cfg.sources)
    dataset = build_dataset(sources, cfg.recipes, log_floor=cfg.log_floor)
    tmp_target = out / "dataset.csv"
    with tempfile.NamedTemporaryFile(
        "w", dir=out, prefix=".dataset.", suffix=".csv", delete=False, newline=""
    ) as fh:
        tmp_name = fh.name
    write_dataset_csv(dataset, tmp_name)
    os.replace(tmp_name, tmp_target)
    manifest = {
        "command": "ingest",
        "seed": args.seed,
        "config": str(Path(args.config).name),
        "log_floor": cfg.log_floor,
        "sources": {
            spec.name: {
                "path": str(Path(spec.path).name),
                "sha256": _sha256(spec.path),
                "rows": int(len(sources[spec.name])),
                "fill": spec.fill,
                "unit": spec.unit,
            }
            for spec in cfg.sources
        },
        "variables": [
            {"name": r.name, "formula": r.formula, "inputs": list(r.inputs), "log": r.log}
            for r in cfg.recipes
        ],
        "dataset": {
            "columns": list(dataset.names),
            "nobs": dataset.nobs,
            "start": str(dataset.index[0]),
            "end": str(dataset.index[-1]),
        },
    }
    _atomic_write(out / "manifest.json", json.dumps(manifest, indent=2) + "\n")
    log.info("ingest: wrote %s (%d rows, %d columns)", tmp_target, dataset.nobs, len(dataset.names))
    return EXIT_OK


def cmd_analyze(args) -> int:
    cfg = parse_analyze_config(args.config)
    formats = _formats(args.format)
    out = _outdir(args)
    dataset = read_dataset_csv(cfg.dataset_path)
    for spec in cfg.models:
        result = run_pipeline(
            dataset,
            spec,
            bounds_level=cfg.bounds_level,
            diagnostics_lags=cfg.diagnostics_lags,
            pretest_det=cfg.pretest_det,
        )
        stem = spec.name or spec.dependent
        if "text" in formats:
            _atomic_write(out / f"{stem}.txt", report.pipeline_text(result))
        if "json" in formats:
            _atomic_write(out / f"{stem}.json", report.pipeline_json(result))
        if "csv" in formats:
            header, rows = report.longrun_csv_rows(result)
            _atomic_write(out / f"{stem}_longrun.csv", _csv_text(header, rows))
            header, rows = report.shortrun_csv_rows(result)
            _atomic_write(out / f"{stem}_shortrun.csv", _csv_text(header, rows))
        log.info("analyze: %s -> %s (%s)", stem, result.bounds.verdict, out)
    return EXIT_OK


SIMULATE_COLUMNS = [
    *SIMULATE_AXES,
    "m_per_miner",
    "total_power",
    "shadow_price",
    "profit_at_equilibrium",
    "foc_residual",
    "reward_elasticity",
    "zero_power",
    "free_entry_n",
    "free_entry_m",
    "free_entry_profit",
    "status",
]


def cmd_simulate(args) -> int:
    cfg = parse_simulate_config(args.config)
    formats = _formats(args.format)
    out = _outdir(args)
    rows = []
    failures = 0
    for point in itertools.product(*(cfg.grid[axis] for axis in SIMULATE_AXES)):
        values = dict(zip(SIMULATE_AXES, point))
        row = [repr(values[a]) for a in SIMULATE_AXES]
        try:
            params = mining.MinerParams(
                gamma=values["gamma"],
                variable_cost=values["variable_cost"],
                discount_rate=values["discount_rate"],
                depreciation=values["depreciation"],
                equipment_price=values["equipment_price"],
                fixed_cost=values["fixed_cost"],
                equipment_efficiency=cfg.equipment_efficiency,
            )
            market = mining.MarketState(
                expected_price=values["expected_price"],
                reward_btc=values["reward_btc"],
                n_miners=values["n_miners"],
            )
            state = mining.equilibrium(params, market)
            foc = (
                mining.foc_residual(params, market, state.m_per_miner)
                if state.m_per_miner > 0
                else None
            )
            row += [
                repr(state.m_per_miner),
                repr(state.total_power),
                repr(state.shadow_price),
                repr(state.zero_profit_residual),
                "" if foc is None else repr(foc),
                repr(mining.reward_elasticity(params.gamma)),
                str(state.m_per_miner == 0.0).lower(),
            ]
            if cfg.free_entry:
                solution = mining.solve_free_entry(
                    params, values["expected_price"], values["reward_btc"]
                )
                row += [repr(solution.n_miners), repr(solution.m_per_miner), repr(solution.profit)]
            else:
                row += ["", "", ""]
            row.append("ok")
        except PowsecError as exc:
            failures += 1
            row = row[: len(SIMULATE_AXES)]
            row += [""] * (len(SIMULATE_COLUMNS) - len(SIMULATE_AXES) - 1)
            row.append(f"error: {exc}")
        rows.append(row)
    if not rows:
        raise ConfigError("empty simulation grid")
    csv_text = _csv_text(SIMULATE_COLUMNS, rows)
    _atomic_write(out / "simulate.csv", csv_text)
    if "json" in formats:
        payload = [dict(zip(SIMULATE_COLUMNS, row)) for row in rows]
        _atomic_write(out / "simulate.json", json.dumps(payload, indent=2) + "\n")
    if "text" in formats:
        _atomic_write(out / "simulate.txt", report.text_table(SIMULATE_COLUMNS, rows) + "\n")
    if failures:
        log.warning("simulate: %d of %d grid points failed", failures, len(rows))
    return EXIT_OK


ATTACK_COLUMNS = [
    "label",
    "power_multiple",
    "duration_blocks",
    "recovery_share",
    "price_drop",
    "payoff",
    "double_spend_btc",
    "cost_eq13",
    "cost_prose",
    "gain",
    "beta",
    "beta_negative",
    "compatible_eq13",
    "compatible_prose",
    "compatible_eq14",
    "min_deterrence_reward",
    "status",
]


def cmd_attack(args) -> int:
    cfg = parse_attack_config(args.config)
    formats = _formats(args.format)
    out = _outdir(args)
    rows = []
    failures = 0
    m_star = mining.per_miner_power(cfg.params, cfg.market)
    for sc in cfg.scenarios:
        row = [
            sc.label,
            repr(sc.power_multiple),
            repr(sc.duration_blocks),
            repr(sc.recovery_share),
            repr(sc.price_drop),
            "" if sc.payoff is None else repr(sc.payoff),
            "" if sc.double_spend_btc is None else repr(sc.double_spend_btc),
        ]
        try:
            printed = attack_mod.incentive_compatible(sc, cfg.params, cfg.market, form="eq13")
            prose = attack_mod.incentive_compatible(sc, cfg.params, cfg.market, form="prose")
            try:
                reduced = attack_mod.incentive_compatible_reduced(sc, cfg.params, cfg.market)
                reduced_verdict = str(reduced.compatible).lower()
            except DataError:
                reduced_verdict = "undefined (beta=0)"
            row += [
                repr(printed.cost),
                repr(prose.cost),
                repr(printed.gain),
                repr(printed.beta),
                str(printed.beta_negative).lower(),
                str(printed.compatible).lower(),
                str(prose.compatible).lower(),
                reduced_verdict,
            ]
            if cfg.min_deterrence:
                threshold = attack_mod.min_deterrence_reward(
                    sc, cfg.params, cfg.market.n_miners, cfg.market.reward_btc
                )
                row.append("inf" if math.isinf(threshold) else repr(threshold))
            else:
                row.append("")
            row.append("ok")
        except PowsecError as exc:
            failures += 1
            row = row[:7] + [""] * (len(ATTACK_COLUMNS) - 8) + [f"error: {exc}"]
        rows.append(row)
    csv_text = _csv_text(ATTACK_COLUMNS, rows)
    _atomic_write(out / "attack.csv", csv_text)
    if "json" in formats:
        payload = {
            "equilibrium_power_per_miner": m_star,
            "scenarios": [dict(zip(ATTACK_COLUMNS, row)) for row in rows],
        }
        _atomic_write(out / "attack.json", json.dumps(payload, indent=2) + "\n")
    if "text" in formats:
        _atomic_write(out / "attack.txt", report.text_table(ATTACK_COLUMNS, rows) + "\n")
    if failures:
        log.warning("attack: %d of %d scenarios failed", failures, len(rows))
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(
        stream=sys.stderr,
        level=[logging.WARNING, logging.INFO, logging.DEBUG][min(args.verbose, 2)],
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return args.fn(args)
    except ConfigError as exc:
        print(f"powsec: config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except PretestRefusalError as exc:
        print(f"powsec: {exc}", file=sys.stderr)
        return EXIT_PRETEST
    except DataError as exc:
        print(f"powsec: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except NumericError as exc:
        print(f"powsec: numeric error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except PowsecError as exc:
        print(f"powsec: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
