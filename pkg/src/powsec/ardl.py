"""ARDL estimation, Pesaran bounds testing, and the error-correction form.

The levels model regresses the dependent variable on its own lags 1..g
and lags 0..z_j of each regressor plus an intercept. Lag orders come
from AIC over a candidate grid evaluated on a common trimmed sample;
the bounds F test checks joint significance of the lagged levels in the
conditional error-correction regression against the shipped Pesaran
case III bounds; the ECM reparameterization is exact (identical
residuals), so the long-run coefficients and adjustment speed follow
algebraically.
"""

from __future__ import annotations

import csv
import itertools
import math
from dataclasses import dataclass, field
from importlib import resources

import numpy as np

from . import _kernels
from .econometrics.diagnostics import DiagnosticsReport, diagnostics_report
from .econometrics.ols import OlsFit, ols
from .errors import ConfigError, DataError, NumericError, PretestRefusalError
from .timeseries import Dataset, SummaryStats, describe
from .unitroot import IntegrationReport, classify_integration

BOUNDS_LEVELS = ("1%", "5%", "10%")
#: exhaustive search is used when the candidate grid is at most this large
EXHAUSTIVE_LIMIT = 4096


@dataclass(frozen=True)
class ArdlSpec:
    """What to estimate: dependent, regressors, lag caps, bounds case."""

    dependent: str
    regressors: tuple[str, ...]
    max_g: int = 7
    max_z: int = 7
    case: str = "III"
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "regressors", tuple(self.regressors))
        if not self.regressors:
            raise ConfigError("at least one regressor is required")
        if len(set(self.regressors)) != len(self.regressors):
            raise ConfigError("regressors must be unique")
        if self.dependent in self.regressors:
            raise ConfigError("dependent variable cannot be one of the regressors")
        if self.max_g < 1:
            raise ConfigError("max_g must be >= 1")
        if self.max_z < 0:
            raise ConfigError("max_z must be >= 0")
        if self.case != "III":
            raise ConfigError("only bounds case III (unrestricted intercept, no trend) is shipped")


@dataclass(frozen=True)
class ArdlOrders:
    """Chosen lag orders: g for the dependent, z_j per regressor."""

    g: int
    z: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "z", tuple(int(v) for v in self.z))
        if self.g < 1:
            raise ConfigError("g must be >= 1")
        if any(v < 0 for v in self.z):
            raise ConfigError("z orders must be >= 0")

    @property
    def trim(self) -> int:
        return max([self.g, *self.z])

    @property
    def total(self) -> int:
        return self.g + sum(self.z)


@dataclass(frozen=True)
class ArdlFit:
    """Fitted levels ARDL; carries the raw arrays for bounds/ECM stages."""

    spec: ArdlSpec
    orders: ArdlOrders
    fit: OlsFit
    dep: np.ndarray
    regs: tuple[np.ndarray, ...]

    @property
    def aic(self) -> float:
        return self.fit.aic

    @property
    def phi(self) -> np.ndarray:
        """Coefficients on the dependent's lags 1..g."""
        return np.array([self.fit.coef(f"{self.spec.dependent}(-{i})") for i in range(1, self.orders.g + 1)])

    def beta(self, regressor: str) -> np.ndarray:
        """Coefficients on one regressor's lags 0..z_j."""
        j = self.spec.regressors.index(regressor)
        out = [self.fit.coef(_lag_name(regressor, i)) for i in range(self.orders.z[j] + 1)]
        return np.array(out)


def _lag_name(name: str, i: int) -> str:
    return name if i == 0 else f"{name}(-{i})"


def _column(values: np.ndarray, trim: int, lag_offset: int) -> np.ndarray:
    return values[trim - lag_offset : values.size - lag_offset]


def _levels_design(dep, regs, spec: ArdlSpec, orders: ArdlOrders, trim: int):
    """Lag-expanded levels design on rows trim..T-1."""
    cols, names = [], []
    for i in range(1, orders.g + 1):
        cols.append(_column(dep, trim, i))
        names.append(f"{spec.dependent}(-{i})")
    for j, x in enumerate(regs):
        for i in range(orders.z[j] + 1):
            cols.append(_column(x, trim, i))
            names.append(_lag_name(spec.regressors[j], i))
    return dep[trim:], np.column_stack(cols), names


def _extract(data: Dataset, spec: ArdlSpec):
    dep = data.column(spec.dependent)
    regs = tuple(data.column(name) for name in spec.regressors)
    return dep, regs


def fit_ardl(data: Dataset, spec: ArdlSpec, orders: ArdlOrders) -> ArdlFit:
    """OLS on the lag-expanded design, sample trimmed by the largest lag."""
    dep, regs = _extract(data, spec)
    if orders.g > spec.max_g or any(z > spec.max_z for z in orders.z):
        raise ConfigError("orders exceed the spec caps")
    if len(orders.z) != len(regs):
        raise ConfigError(f"{len(orders.z)} z orders for {len(regs)} regressors")
    trim = orders.trim
    if dep.size - trim <= orders.total + len(regs) + 1:
        raise DataError("sample too short for the requested lag orders")
    y, X, names = _levels_design(dep, regs, spec, orders, trim)
    fit = ols(y, X, names=names, intercept=True)
    return ArdlFit(spec=spec, orders=orders, fit=fit, dep=dep, regs=regs)


def candidate_key(aic: float, g: int, z: tuple[int, ...]):
    """Candidate ordering for lag selection: AIC first, ties prefer fewer
    total lags, then the lexicographically smallest order tuple."""
    return (aic, g + sum(z), (g, *z))


def bounds_verdict(fstat: float, lower: float, upper: float) -> str:
    """Map an F statistic onto the bounds-test conclusion."""
    if fstat < lower:
        return "no_long_run"
    if fstat > upper:
        return "cointegrated"
    return "inconclusive"


def select_orders(data: Dataset, spec: ArdlSpec) -> ArdlOrders:
    """Minimize AIC over the lag-order grid.

    All candidates are evaluated on the common sample trimmed by the caps
    so their AICs are comparable. The search is exhaustive up to
    EXHAUSTIVE_LIMIT candidates, otherwise deterministic coordinate
    descent from the full-lag point. Ties prefer fewer total lags, then
    the lexicographically smallest order tuple.
    """
    dep, regs = _extract(data, spec)
    k = len(regs)
    trim = max(spec.max_g, spec.max_z)
    max_params = 1 + spec.max_g + k * (spec.max_z + 1)
    n = dep.size - trim
    if n <= max_params:
        raise DataError(
            f"sample too short for the lag caps: {n} usable rows, {max_params} parameters"
        )

    def aic_of(g: int, z: tuple[int, ...]) -> float:
        y, X, _ = _levels_design(dep, regs, spec, ArdlOrders(g, z), trim)
        X = np.column_stack([np.ones(y.size), X])
        try:
            _, _, _, ssr = _kernels.lstsq_stats(X, y)
        except ValueError:
            return math.inf
        if ssr <= 0:
            return -math.inf
        return y.size * math.log(ssr / y.size) + 2.0 * X.shape[1]

    def key(g: int, z: tuple[int, ...]):
        return candidate_key(aic_of(g, z), g, z)

    n_candidates = spec.max_g * (spec.max_z + 1) ** k
    if n_candidates <= EXHAUSTIVE_LIMIT:
        best = min(
            ((g, z) for g in range(1, spec.max_g + 1)
             for z in itertools.product(range(spec.max_z + 1), repeat=k)),
            key=lambda cand: key(*cand),
        )
        return ArdlOrders(*best)

    g, z = spec.max_g, tuple([spec.max_z] * k)
    best_key = key(g, z)
    for _ in range(100):
        changed = False
        for coord in range(k + 1):
            if coord == 0:
                candidates = [(cg, z) for cg in range(1, spec.max_g + 1)]
            else:
                candidates = [
                    (g, z[: coord - 1] + (cz,) + z[coord:])
                    for cz in range(spec.max_z + 1)
                ]
            cand_best = min(candidates, key=lambda cand: key(*cand))
            cand_key = key(*cand_best)
            if cand_key < best_key:
                g, z = cand_best
                best_key = cand_key
                changed = True
        if not changed:
            break
    return ArdlOrders(g, z)


_bounds_cache: dict | None = None


def _bounds_table() -> dict:
    global _bounds_cache
    if _bounds_cache is None:
        table: dict = {}
        ref = resources.files("powsec.data").joinpath("pesaran_bounds_case3.csv")
        with ref.open("r", encoding="utf-8") as fh:
            for row in csv.DictReader(fh):
                table[(row["case"], int(row["k"]), row["level"])] = (
                    float(row["lower"]),
                    float(row["upper"]),
                )
        _bounds_cache = table
    return _bounds_cache


def bounds_bounds(k: int, level: str, case: str = "III") -> tuple[float, float]:
    """Shipped (I0, I1) critical bounds for k regressors."""
    try:
        return _bounds_table()[(case, k, level)]
    except KeyError:
        raise NumericError(
            f"no critical bounds for case {case}, k={k}, level {level}"
        ) from None


@dataclass(frozen=True)
class BoundsResult:
    """Pesaran bounds F test outcome."""

    fstat: float
    k: int
    case: str
    level: str
    lower: float
    upper: float
    verdict: str
    bounds_by_level: dict[str, tuple[float, float]] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "fstat": self.fstat,
            "k": self.k,
            "case": self.case,
            "level": self.level,
            "lower": self.lower,
            "upper": self.upper,
            "verdict": self.verdict,
            "bounds_by_level": {k: list(v) for k, v in self.bounds_by_level.items()},
        }


def _ecm_rows(ardl: ArdlFit):
    """Rows and building blocks shared by the bounds and ECM designs."""
    spec, orders = ardl.spec, ardl.orders
    trim = orders.trim
    dep, regs = ardl.dep, ardl.regs
    dy = np.diff(dep)
    dxs = [np.diff(x) for x in regs]
    rows = slice(trim, dep.size)
    return spec, orders, trim, dep, regs, dy, dxs, rows


def bounds_test(ardl: ArdlFit, level: str = "5%") -> BoundsResult:
    """F test of the lagged levels in the conditional ECM regression.

    Regressors with z_j = 0 still contribute a contemporaneous
    difference term (the conditional model of the bounds test), so the
    unrestricted regression uses effective orders max(z_j, 1).
    """
    if level not in BOUNDS_LEVELS:
        raise ConfigError(f"level must be one of {BOUNDS_LEVELS}")
    spec, orders, trim, dep, regs, dy, dxs, _ = _ecm_rows(ardl)
    k = len(regs)
    n = dep.size - trim

    level_cols = [_column(dep, trim, 1)]
    for x in regs:
        level_cols.append(_column(x, trim, 1))
    short_cols = [np.ones(n)]
    for i in range(1, orders.g):
        short_cols.append(_column(dy, trim - 1, i))
    for j, dx in enumerate(dxs):
        for i in range(max(orders.z[j], 1)):
            short_cols.append(_column(dx, trim - 1, i))

    y = dy[trim - 1 :]
    Xu = np.column_stack(level_cols + short_cols)
    Xr = np.column_stack(short_cols)
    try:
        _, _, _, ssr_u = _kernels.lstsq_stats(Xu, y)
        _, _, _, ssr_r = _kernels.lstsq_stats(Xr, y)
    except ValueError as exc:
        raise NumericError(f"bounds regression failed: {exc}") from exc
    q = k + 1
    dof = n - Xu.shape[1]
    if dof <= 0:
        raise DataError("not enough observations for the bounds regression")
    if ssr_u <= 0:
        raise NumericError("bounds regression has zero residual variance")
    fstat = ((ssr_r - ssr_u) / q) / (ssr_u / dof)
    by_level = {lv: bounds_bounds(k, lv, spec.case) for lv in BOUNDS_LEVELS}
    lower, upper = by_level[level]
    verdict = bounds_verdict(fstat, lower, upper)
    return BoundsResult(
        fstat=float(fstat),
        k=k,
        case=spec.case,
        level=level,
        lower=lower,
        upper=upper,
        verdict=verdict,
        bounds_by_level=by_level,
    )


@dataclass(frozen=True)
class EcmFit:
    """Exact error-correction reparameterization of a fitted ARDL.

    alpha is stored positive-for-stable (1 - sum of dependent-lag
    coefficients); reports print the conventional negative error
    correction term -alpha.
    """

    ardl: ArdlFit
    regression: OlsFit
    alpha: float
    alpha_se: float
    intercept: float
    theta_long_run: dict[str, float]
    psi_dep: tuple[float, ...]
    psi_dep_se: tuple[float, ...]
    psi_regs: dict[str, tuple[float, ...]]
    psi_regs_se: dict[str, tuple[float, ...]]

    @property
    def error_correction_term(self) -> float:
        return -self.alpha

    @property
    def residuals(self) -> np.ndarray:
        return self.regression.residuals

    @property
    def fitted_diff(self) -> np.ndarray:
        return self.regression.fitted


def to_ecm(ardl: ArdlFit) -> EcmFit:
    """Reparameterize the levels fit into error-correction form.

    The transformed regression spans the same column space, so fitted
    values and residuals are identical to the ARDL fit; coefficient
    identities (alpha = 1 - sum(phi), alpha*theta_j = sum(beta_j)) hold
    exactly. Regressors with z_j = 0 enter as their contemporaneous
    level (their single coefficient is alpha*theta_j).
    """
    spec, orders, trim, dep, regs, dy, dxs, _ = _ecm_rows(ardl)
    n = dep.size - trim

    cols = [_column(dep, trim, 1)]
    names = [f"{spec.dependent}(-1)"]
    for j, x in enumerate(regs):
        if orders.z[j] >= 1:
            cols.append(_column(x, trim, 1))
            names.append(f"{spec.regressors[j]}(-1)")
        else:
            cols.append(_column(x, trim, 0))
            names.append(spec.regressors[j])
    for i in range(1, orders.g):
        cols.append(_column(dy, trim - 1, i))
        names.append(f"d.{spec.dependent}(-{i})")
    for j, dx in enumerate(dxs):
        for i in range(orders.z[j]):
            cols.append(_column(dx, trim - 1, i))
            names.append(_lag_name(f"d.{spec.regressors[j]}", i))

    y = dy[trim - 1 :]
    assert y.size == n
    regression = ols(y, np.column_stack(cols), names=names, intercept=True)

    alpha = -regression.coef(f"{spec.dependent}(-1)")
    alpha_se = regression.se(f"{spec.dependent}(-1)")
    if abs(alpha) <= 1e-10:
        raise NumericError(
            "speed of adjustment is numerically zero: the lag polynomial has "
            "a unit root, long-run coefficients are undefined"
        )
    theta = {}
    for j, name in enumerate(spec.regressors):
        level_name = f"{name}(-1)" if orders.z[j] >= 1 else name
        theta[name] = regression.coef(level_name) / alpha
    psi_dep = tuple(
        regression.coef(f"d.{spec.dependent}(-{i})") for i in range(1, orders.g)
    )
    psi_dep_se = tuple(
        regression.se(f"d.{spec.dependent}(-{i})") for i in range(1, orders.g)
    )
    psi_regs = {}
    psi_regs_se = {}
    for j, name in enumerate(spec.regressors):
        psi_regs[name] = tuple(
            regression.coef(_lag_name(f"d.{name}", i)) for i in range(orders.z[j])
        )
        psi_regs_se[name] = tuple(
            regression.se(_lag_name(f"d.{name}", i)) for i in range(orders.z[j])
        )
    return EcmFit(
        ardl=ardl,
        regression=regression,
        alpha=float(alpha),
        alpha_se=float(alpha_se),
        intercept=regression.coef("const"),
        theta_long_run=theta,
        psi_dep=psi_dep,
        psi_dep_se=psi_dep_se,
        psi_regs=psi_regs,
        psi_regs_se=psi_regs_se,
    )


def speed_of_adjustment_days(alpha_magnitude: float) -> float:
    """Days to absorb the long-run disequilibrium: 1/|alpha| for a per-day rate."""
    a = abs(float(alpha_magnitude))
    if a == 0:
        raise DataError("zero adjustment rate has no finite horizon")
    if a > 1:
        raise DataError("per-day adjustment rate cannot exceed 1")
    return 1.0 / a


def shock_persistence_days(coef_magnitude: float) -> float:
    """Days for a short-run own-lag shock to fade: 1/|coefficient|."""
    c = abs(float(coef_magnitude))
    if c == 0:
        raise DataError("zero coefficient has no finite horizon")
    if c > 1:
        raise DataError("coefficient magnitude cannot exceed 1")
    return 1.0 / c


@dataclass(frozen=True)
class PipelineReport:
    """Everything one model run produces, ready for rendering."""

    spec: ArdlSpec
    summary: SummaryStats
    pretests: dict[str, IntegrationReport]
    orders: ArdlOrders
    ardl: ArdlFit
    bounds: BoundsResult
    ecm: EcmFit
    diagnostics: DiagnosticsReport
    adjustment_days: float | None
    persistence_days: tuple[float | None, ...]


def run_pipeline(
    data: Dataset,
    spec: ArdlSpec,
    bounds_level: str = "5%",
    diagnostics_lags: int = 7,
    pretest_det: str = "constant",
) -> PipelineReport:
    """Pretests, order selection, fit, bounds test, ECM, diagnostics.

    Deterministic given the dataset and configuration. Raises
    PretestRefusalError when any variable classifies as I(2) or beyond
    (bounds F statistics are invalid there); other stage failures are
    re-raised with the stage name prefixed.
    """
    columns = [spec.dependent, *spec.regressors]
    for name in columns:
        data.column(name)

    def staged(stage, fn, *args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except PretestRefusalError:
            raise
        except Exception as exc:
            raise type(exc)(f"[{stage}] {exc}") from exc

    pretests = {}
    for name in columns:
        pretests[name] = staged(
            "pretest", classify_integration, data.series(name), det=pretest_det
        )
    offenders = [name for name, rep in pretests.items() if rep.order == "I2plus"]
    if offenders:
        raise PretestRefusalError(
            "pretest: bounds testing refused, computed F statistics are invalid "
            f"for I(2) variables: {offenders}",
            offenders=offenders,
        )

    orders = staged("order_selection", select_orders, data, spec)
    fitted = staged("fit", fit_ardl, data, spec, orders)
    bounds = staged("bounds_test", bounds_test, fitted, bounds_level)
    ecm = staged("ecm", to_ecm, fitted)
    diag = staged("diagnostics", diagnostics_report, fitted.fit, diagnostics_lags)

    alpha = abs(ecm.alpha)
    adjustment = 1.0 / alpha if 0 < alpha <= 1 else None
    persistence = tuple(
        1.0 / abs(c) if 0 < abs(c) <= 1 else None for c in ecm.psi_dep
    )
    summary = staged("describe", describe, data.select(columns))
    return PipelineReport(
        spec=spec,
        summary=summary,
        pretests=pretests,
        orders=orders,
        ardl=fitted,
        bounds=bounds,
        ecm=ecm,
        diagnostics=diag,
        adjustment_days=adjustment,
        persistence_days=persistence,
    )
