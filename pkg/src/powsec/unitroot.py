"""Stationarity pretests: ADF, DF-GLS, Phillips-Perron, and I(d) classification.

Critical values ship as a versioned CSV keyed by (test, deterministic
spec, sample-size bucket, level); the test-suite validates the shipped
numbers against Monte Carlo quantiles of the null distribution instead
of trusting transcription. Lookups use the largest bucket not exceeding
the regression sample size.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from importlib import resources

import numpy as np

from . import _kernels
from .errors import DataError, NumericError
from .timeseries import Series

DETERMINISTICS = {"constant": 1, "constant+trend": 2, "none": 0}
_DET_CODE = {"constant": "c", "constant+trend": "ct", "none": "n"}
LEVELS = ("1%", "5%", "10%")

_table_cache: dict | None = None


def _load_table() -> dict:
    global _table_cache
    if _table_cache is None:
        table: dict = {}
        ref = resources.files("powsec.data").joinpath("unitroot_critical_values.csv")
        with ref.open("r", encoding="utf-8") as fh:
            for row in csv.DictReader(fh):
                key = (row["test"], row["det"], row["level"])
                table.setdefault(key, []).append((int(row["T"]), float(row["value"])))
        for entries in table.values():
            entries.sort()
        _table_cache = table
    return _table_cache


def critical_values(test: str, det: str, nobs: int) -> dict[str, float]:
    """Shipped critical values for (test, deterministic spec) at a sample size.

    Values between tabulated sample-size buckets are interpolated
    linearly in 1/T (the natural scale of the finite-sample correction);
    outside the tabulated range the nearest bucket applies.
    """
    table = _load_table()
    det_code = _DET_CODE[det]
    out = {}
    for level in LEVELS:
        entries = table.get((test, det_code, level))
        if not entries:
            raise NumericError(f"no critical values for ({test}, {det}, {level})")
        out[level] = _interp_inverse_t(entries, nobs)
    return out


def _interp_inverse_t(entries, nobs: int) -> float:
    if nobs <= entries[0][0]:
        return entries[0][1]
    for (t_lo, v_lo), (t_hi, v_hi) in zip(entries, entries[1:]):
        if nobs <= t_hi:
            weight = (1.0 / nobs - 1.0 / t_hi) / (1.0 / t_lo - 1.0 / t_hi)
            return weight * v_lo + (1.0 - weight) * v_hi
    return entries[-1][1]


@dataclass(frozen=True)
class UnitRootResult:
    """One unit-root test: left-tail statistic against tabulated bounds."""

    test: str
    deterministic: str
    lags: int
    statistic: float
    critical_values: dict[str, float]
    reject_at_5pct: bool
    nobs: int

    def to_dict(self) -> dict:
        return {
            "test": self.test,
            "deterministic": self.deterministic,
            "lags": self.lags,
            "statistic": self.statistic,
            "critical_values": dict(self.critical_values),
            "reject_at_5pct": self.reject_at_5pct,
            "nobs": self.nobs,
        }


def _values(series) -> np.ndarray:
    if isinstance(series, Series):
        return series.values
    arr = np.asarray(series, dtype=np.float64).ravel()
    if arr.size == 0:
        raise DataError("empty series")
    return arr


def default_max_lags(nobs: int) -> int:
    """Schwert's rule of thumb: floor(12 * (T/100)^(1/4))."""
    return int(math.floor(12.0 * (nobs / 100.0) ** 0.25))


def _check_not_degenerate(y: np.ndarray) -> None:
    if np.ptp(y) == 0.0 or np.ptp(np.diff(y)) == 0.0:
        raise NumericError("degenerate regression: series has no variation")


def _resolve_lags(y: np.ndarray, max_lags, selection: str):
    if selection not in ("aic", "fixed"):
        raise DataError("selection must be 'aic' or 'fixed'")
    if max_lags is None:
        if selection == "fixed":
            raise DataError("fixed lag selection needs max_lags")
        max_lags = default_max_lags(y.size)
    if max_lags < 0:
        raise DataError("max_lags must be non-negative")
    return int(max_lags), selection == "aic"


def adf(series, det: str = "constant", max_lags=None, selection: str = "aic") -> UnitRootResult:
    """Augmented Dickey-Fuller test; lag order by AIC unless fixed."""
    y = _values(series)
    if det not in DETERMINISTICS:
        raise DataError(f"det must be one of {sorted(DETERMINISTICS)}")
    det_code = DETERMINISTICS[det]
    maxlag, autolag = _resolve_lags(y, max_lags, selection)
    _check_not_degenerate(y)
    try:
        stat, lags, nobs = _kernels.adf_stat(y, det_code, maxlag, autolag)
    except ValueError as exc:
        raise NumericError(f"adf: {exc}") from exc
    cvs = critical_values("adf", det, nobs)
    return UnitRootResult("adf", det, lags, stat, cvs, stat < cvs["5%"], nobs)


def _gls_detrend(y: np.ndarray, det: str) -> np.ndarray:
    """ERS local-to-unity GLS demeaning/detrending."""
    n = y.size
    alpha_bar = 1.0 - (7.0 if det == "constant" else 13.5) / n
    if det == "constant":
        z = np.ones((n, 1))
    else:
        z = np.column_stack([np.ones(n), np.arange(1.0, n + 1.0)])
    yq = np.empty(n)
    zq = np.empty_like(z)
    yq[0] = y[0]
    zq[0] = z[0]
    yq[1:] = y[1:] - alpha_bar * y[:-1]
    zq[1:] = z[1:] - alpha_bar * z[:-1]
    beta, _, _, _ = _kernels.lstsq_stats(zq, yq)
    return y - z @ beta


def dfgls(series, det: str = "constant", max_lags=None, selection: str = "aic") -> UnitRootResult:
    """Dickey-Fuller GLS: detrend first, then a DF regression without
    deterministic terms on the detrended series."""
    y = _values(series)
    if det not in ("constant", "constant+trend"):
        raise DataError("det must be 'constant' or 'constant+trend'")
    _check_not_degenerate(y)
    maxlag, autolag = _resolve_lags(y, max_lags, selection)
    detrended = _gls_detrend(y, det)
    try:
        stat, lags, nobs = _kernels.adf_stat(detrended, 0, maxlag, autolag)
    except ValueError as exc:
        raise NumericError(f"dfgls: {exc}") from exc
    cvs = critical_values("dfgls", det, nobs)
    return UnitRootResult("dfgls", det, lags, stat, cvs, stat < cvs["5%"], nobs)


def default_bandwidth(nobs: int) -> int:
    """Newey-West truncation rule floor(4 * (T/100)^(2/9))."""
    return int(math.floor(4.0 * (nobs / 100.0) ** (2.0 / 9.0)))


def pp(series, det: str = "constant", bandwidth=None) -> UnitRootResult:
    """Phillips-Perron Z_tau test with Bartlett-kernel long-run variance."""
    y = _values(series)
    if det not in ("constant", "constant+trend"):
        raise DataError("det must be 'constant' or 'constant+trend'")
    _check_not_degenerate(y)
    dy = np.diff(y)
    n = dy.size
    cols = [np.ones(n)]
    if det == "constant+trend":
        cols.append(np.arange(1.0, n + 1.0))
    cols.append(y[:-1])
    X = np.column_stack(cols)
    try:
        beta, se, resid, rss = _kernels.lstsq_stats(X, dy)
    except ValueError as exc:
        raise NumericError(f"pp: {exc}") from exc
    rho_ix = X.shape[1] - 1
    if not se[rho_ix] > 0:
        raise NumericError("pp: degenerate regression (zero residual variance)")
    tstat = float(beta[rho_ix] / se[rho_ix])
    k = X.shape[1]
    s2 = rss / (n - k)
    gamma0 = rss / n
    L = int(bandwidth) if bandwidth is not None else default_bandwidth(n)
    if L < 0 or L >= n:
        raise DataError("bandwidth must be in [0, nobs)")
    lam2 = gamma0
    for j in range(1, L + 1):
        weight = 1.0 - j / (L + 1.0)
        lam2 += 2.0 * weight * float(resid[j:] @ resid[:-j]) / n
    if lam2 <= 0:
        raise NumericError("pp: non-positive long-run variance")
    zt = math.sqrt(gamma0 / lam2) * tstat - 0.5 * (lam2 - gamma0) / math.sqrt(lam2) * (
        n * float(se[rho_ix]) / math.sqrt(s2)
    )
    cvs = critical_values("pp", det, n)
    return UnitRootResult("pp", det, L, zt, cvs, zt < cvs["5%"], n)


@dataclass(frozen=True)
class IntegrationReport:
    """I(d) classification with the full battery on level and difference."""

    name: str
    order: str
    level_tests: dict[str, UnitRootResult]
    difference_tests: dict[str, UnitRootResult]

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "order": self.order,
            "level": {k: v.to_dict() for k, v in self.level_tests.items()},
            "first_difference": {k: v.to_dict() for k, v in self.difference_tests.items()},
        }


def classify_integration(
    series,
    det: str = "constant",
    decide_by: str = "adf",
    decision_level: str = "1%",
    name: str = "",
) -> IntegrationReport:
    """Label a series I0 / I1 / I2plus.

    The decision uses one test (ADF by default) in bottom-up
    (Dickey-Pantula) order: a series whose first difference fails to
    reject the unit root is I2plus; otherwise a level rejection means
    I0, else I1. Testing the difference first keeps a spurious level
    rejection on a twice-integrated series from masquerading as
    stationarity.

    Order decisions are taken at a strict 1% level by default: a pair of
    5%-sized decisions would mislabel roughly one series in ten, and the
    costly mistake (treating an I(2) series as bounds-testable) is the
    one a conservative level avoids. The reported test results keep
    their conventional 5% rejection flags; all three tests are reported
    for both the level and the first difference.
    """
    y = _values(series)
    if isinstance(series, Series) and not name:
        name = series.name
    if y.size < 50:
        raise DataError("classification needs at least 50 observations")
    if decide_by not in ("adf", "dfgls", "pp"):
        raise DataError("decide_by must be adf, dfgls, or pp")
    if decision_level not in LEVELS:
        raise DataError(f"decision_level must be one of {LEVELS}")

    def battery(values) -> dict[str, UnitRootResult]:
        return {
            "adf": adf(values, det=det),
            "dfgls": dfgls(values, det=det),
            "pp": pp(values, det=det),
        }

    def rejects(result: UnitRootResult) -> bool:
        return result.statistic < result.critical_values[decision_level]

    level_tests = battery(y)
    difference_tests = battery(np.diff(y))
    if not rejects(difference_tests[decide_by]):
        order = "I2plus"
    elif rejects(level_tests[decide_by]):
        order = "I0"
    else:
        order = "I1"
    return IntegrationReport(name, order, level_tests, difference_tests)
