"""Rendering of pipeline results: aligned text, JSON, and CSV rows.

Text tables mirror the descriptive-stats / long-run / short-run layout
of the study report; JSON carries full-precision numbers for machines.
Nothing here writes timestamps, so outputs are byte-stable for
identical inputs.
"""

from __future__ import annotations

import json

import numpy as np

from .ardl import PipelineReport
from .timeseries import SummaryStats


def _fmt(value, digits=3) -> str:
    if value is None:
        return ""
    if isinstance(value, float) and not np.isfinite(value):
        return str(value)
    return f"{value:.{digits}f}" if isinstance(value, float) else str(value)


def text_table(headers, rows) -> str:
    cells = [[str(h) for h in headers]] + [[_fmt(c) for c in row] for row in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(headers))]
    lines = []
    for r_ix, row in enumerate(cells):
        line = "  ".join(
            cell.ljust(widths[i]) if i == 0 else cell.rjust(widths[i])
            for i, cell in enumerate(row)
        )
        lines.append(line.rstrip())
        if r_ix == 0:
            lines.append("-" * len(lines[0]))
    return "\n".join(lines)


def summary_rows(summary: SummaryStats):
    return [
        [c.name, c.obs, float(c.mean), float(c.std), float(c.minimum), float(c.maximum)]
        for c in summary.columns
    ]


def summary_text(summary: SummaryStats) -> str:
    return text_table(["Variable", "Obs", "Mean", "Std. Dev.", "Min", "Max"], summary_rows(summary))


def _stars(pvalueish_se: float, coef: float) -> str:
    # two-sided normal approximation, the usual 1/5/10% star convention
    if pvalueish_se <= 0 or not np.isfinite(pvalueish_se):
        return ""
    t = abs(coef) / pvalueish_se
    if t >= 2.576:
        return "***"
    if t >= 1.96:
        return "**"
    if t >= 1.645:
        return "*"
    return ""


def longrun_rows(report: PipelineReport):
    ecm = report.ecm
    rows = []
    for name in report.spec.regressors:
        rows.append([name, float(ecm.theta_long_run[name])])
    rows.append([f"{report.spec.dependent} (-1) [error correction]",
                 float(ecm.error_correction_term)])
    rows.append(["speed-of-adjustment (days)",
                 float(report.adjustment_days) if report.adjustment_days else None])
    return rows


def shortrun_rows(report: PipelineReport):
    ecm = report.ecm
    rows = []
    for i, (c, se) in enumerate(zip(ecm.psi_dep, ecm.psi_dep_se), start=1):
        rows.append([f"d.{report.spec.dependent}(-{i})", float(c), float(se), _stars(se, c)])
    for name in report.spec.regressors:
        for i, (c, se) in enumerate(zip(ecm.psi_regs[name], ecm.psi_regs_se[name])):
            label = f"d.{name}" if i == 0 else f"d.{name}(-{i})"
            rows.append([label, float(c), float(se), _stars(se, c)])
    rows.append(["constant", float(ecm.intercept), float(ecm.regression.se("const")),
                 _stars(ecm.regression.se("const"), ecm.intercept)])
    return rows


def pipeline_text(report: PipelineReport) -> str:
    spec = report.spec
    parts = [f"== model {spec.name or spec.dependent} =="]
    parts.append("-- descriptive statistics --")
    parts.append(summary_text(report.summary))
    parts.append("-- unit-root pretests (order decisions) --")
    rows = [
        [name, rep.order,
         float(rep.level_tests["adf"].statistic),
         float(rep.difference_tests["adf"].statistic)]
        for name, rep in report.pretests.items()
    ]
    parts.append(text_table(["Variable", "Order", "ADF level", "ADF diff"], rows))
    orders = report.orders
    z_text = ", ".join(
        f"{name}:{z}" for name, z in zip(spec.regressors, orders.z)
    )
    parts.append(f"-- selected orders: g={orders.g}, z=({z_text}), AIC={report.ardl.aic:.3f} --")
    b = report.bounds
    parts.append(
        f"-- bounds test (case {b.case}, k={b.k}): F={b.fstat:.3f} vs "
        f"({b.lower:.2f}, {b.upper:.2f}) at {b.level} -> {b.verdict} --"
    )
    parts.append("-- long-run coefficients --")
    parts.append(text_table(["Variable", "Coefficient"], longrun_rows(report)))
    parts.append("-- short-run coefficients --")
    parts.append(text_table(["Variable", "Coefficient", "Std. Err.", ""], shortrun_rows(report)))
    persistence = [d for d in report.persistence_days if d is not None]
    if persistence:
        parts.append(
            f"-- own-lag shock persistence: {min(persistence):.1f} to "
            f"{max(persistence):.1f} days --"
        )
    parts.append("-- diagnostics --")
    rows = [
        [t.name, float(t.statistic), t.distribution, float(t.pvalue),
         "reject" if t.reject_at_5pct else "ok"]
        for t in report.diagnostics.tests
    ]
    rows.append([
        "cusum", float(np.max(np.abs(report.diagnostics.stability.path))),
        f"{report.diagnostics.stability.significance:.0%} band", None,
        "stable" if report.diagnostics.stability.stable else "unstable",
    ])
    parts.append(text_table(["Test", "Statistic", "Reference", "p-value", "5%"], rows))
    return "\n".join(parts) + "\n"


def pipeline_dict(report: PipelineReport) -> dict:
    ecm = report.ecm
    return {
        "model": report.spec.name,
        "dependent": report.spec.dependent,
        "regressors": list(report.spec.regressors),
        "descriptive_stats": {
            c.name: {"obs": c.obs, "mean": c.mean, "std": c.std,
                     "min": c.minimum, "max": c.maximum}
            for c in report.summary.columns
        },
        "pretests": {name: rep.to_dict() for name, rep in report.pretests.items()},
        "orders": {"g": report.orders.g,
                   "z": {n: z for n, z in zip(report.spec.regressors, report.orders.z)}},
        "ardl": {
            "aic": report.ardl.aic,
            "coefficients": {n: float(c) for n, c in
                             zip(report.ardl.fit.names, report.ardl.fit.params)},
            "stderr": {n: float(s) for n, s in
                       zip(report.ardl.fit.names, report.ardl.fit.stderr)},
            "nobs": report.ardl.fit.nobs,
            "rsquared": report.ardl.fit.rsquared,
        },
        "bounds": report.bounds.to_dict(),
        "ecm": {
            "alpha": ecm.alpha,
            "alpha_se": ecm.alpha_se,
            "error_correction_term": ecm.error_correction_term,
            "intercept": ecm.intercept,
            "theta_long_run": {k: float(v) for k, v in ecm.theta_long_run.items()},
            "psi_dep": [float(v) for v in ecm.psi_dep],
            "psi_dep_se": [float(v) for v in ecm.psi_dep_se],
            "psi_regs": {k: [float(x) for x in v] for k, v in ecm.psi_regs.items()},
        },
        "adjustment_days": report.adjustment_days,
        "persistence_days": [d for d in report.persistence_days],
        "diagnostics": report.diagnostics.to_dict(),
    }


def pipeline_json(report: PipelineReport) -> str:
    return json.dumps(pipeline_dict(report), indent=2, allow_nan=True) + "\n"


def longrun_csv_rows(report: PipelineReport):
    header = ["variable", "value"]
    rows = [[name, repr(float(v))] for name, v in
            ((n, report.ecm.theta_long_run[n]) for n in report.spec.regressors)]
    rows.append(["error_correction_term", repr(report.ecm.error_correction_term)])
    rows.append(["speed_of_adjustment_days",
                 "" if report.adjustment_days is None else repr(report.adjustment_days)])
    return header, rows


def shortrun_csv_rows(report: PipelineReport):
    header = ["variable", "coefficient", "stderr"]
    rows = [[r[0], repr(r[1]), repr(r[2])] for r in shortrun_rows(report)]
    return header, rows
