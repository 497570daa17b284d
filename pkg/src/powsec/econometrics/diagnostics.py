"""Residual diagnostics: serial correlation, heteroscedasticity, normality,
and parameter-stability (CUSUM of recursive residuals).

Conventions pinned here because they matter for reproducibility:
Breusch-Godfrey uses LM = (T - p) * R^2 of the auxiliary regression;
Durbin's alternative is the Wald F on the same auxiliary regression;
Breusch-Pagan/Cook-Weisberg regresses scaled squared residuals on fitted
values with LM = ESS/2; normality is Jarque-Bera.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .. import _kernels
from ..errors import NumericError
from .distributions import chi2_sf, f_sf
from .ols import OlsFit, ols

#: Brown-Durbin-Evans CUSUM boundary constants by significance level
CUSUM_BOUNDS = {0.01: 1.143, 0.05: 0.948, 0.10: 0.850}


@dataclass(frozen=True)
class TestResult:
    name: str
    statistic: float
    distribution: str
    pvalue: float
    reject_at_5pct: bool

    def __post_init__(self):
        if not 0.0 <= self.pvalue <= 1.0:
            raise NumericError(f"{self.name}: p-value {self.pvalue} outside [0, 1]")


def _result(name: str, stat: float, dist: str, pvalue: float) -> TestResult:
    return TestResult(name, float(stat), dist, float(pvalue), pvalue < 0.05)


def _lagged_residual_design(fit: OlsFit, p: int) -> np.ndarray:
    """Original regressors plus p lags of the residuals, pre-sample zeros."""
    u = fit.residuals
    lags = np.zeros((u.size, p))
    for j in range(1, p + 1):
        lags[j:, j - 1] = u[:-j]
    return np.column_stack([fit.design, lags])


def breusch_godfrey(fit: OlsFit, p: int) -> TestResult:
    """LM test of no serial correlation up to order p."""
    if p < 1:
        raise NumericError("lag order must be >= 1")
    nobs, k = fit.nobs, fit.nparams
    if nobs - k - p <= 0:
        raise NumericError("not enough observations for the auxiliary regression")
    aux = ols(fit.residuals, _lagged_residual_design(fit, p), intercept=False)
    stat = (nobs - p) * aux.rsquared
    return _result("breusch_godfrey", stat, f"chi2({p})", chi2_sf(stat, p))


def durbin_alternative(fit: OlsFit, p: int) -> TestResult:
    """Wald F on the lagged-residual block of the auxiliary regression."""
    if p < 1:
        raise NumericError("lag order must be >= 1")
    nobs, k = fit.nobs, fit.nparams
    dof = nobs - k - p
    if dof <= 0:
        raise NumericError("not enough observations for the auxiliary regression")
    u = fit.residuals
    aux = ols(u, _lagged_residual_design(fit, p), intercept=False)
    restricted = ols(u, fit.design, intercept=False)
    stat = ((restricted.ssr - aux.ssr) / p) / (aux.ssr / dof)
    return _result("durbin_alternative", stat, f"F({p}, {dof})", f_sf(stat, p, dof))


def breusch_pagan(fit: OlsFit) -> TestResult:
    """Breusch-Pagan/Cook-Weisberg test against variance moving with the mean."""
    u = fit.residuals
    sigma2 = fit.ssr / fit.nobs
    var_y = float(np.var(fit.y))
    if sigma2 <= 0 or sigma2 <= 1e-20 * max(var_y, 1e-300):
        raise NumericError("zero residual variance (perfect fit)")
    g = u * u / sigma2
    aux = ols(g, fit.fitted[:, None], intercept=True)
    ess = float(((aux.fitted - g.mean()) ** 2).sum())
    stat = 0.5 * ess
    return _result("breusch_pagan", stat, "chi2(1)", chi2_sf(stat, 1))


def jarque_bera(residuals) -> TestResult:
    """Jarque-Bera normality test from sample skewness and kurtosis."""
    u = np.asarray(residuals, dtype=np.float64).ravel()
    nobs = u.size
    if nobs < 8:
        raise NumericError("need at least 8 observations")
    centered = u - u.mean()
    m2 = float((centered**2).mean())
    if m2 <= 0:
        raise NumericError("constant residuals")
    skew = float((centered**3).mean()) / m2**1.5
    kurt = float((centered**4).mean()) / m2**2
    stat = nobs / 6.0 * (skew**2 + 0.25 * (kurt - 3.0) ** 2)
    return _result("jarque_bera", stat, "chi2(2)", chi2_sf(stat, 2))


def recursive_residuals(y, X) -> np.ndarray:
    """Standardized one-step-ahead recursive residuals for y ~ X."""
    y = np.asarray(y, dtype=np.float64).ravel()
    X = np.atleast_2d(np.asarray(X, dtype=np.float64))
    if X.shape[0] != y.size:
        raise NumericError("X and y lengths differ")
    if X.shape[0] <= X.shape[1]:
        raise NumericError("need more observations than parameters")
    try:
        return _kernels.recursive_residuals(X, y)
    except ValueError as exc:
        raise NumericError(str(exc)) from exc


@dataclass(frozen=True)
class CusumResult:
    """CUSUM path with its significance boundary; stable iff never crossed."""

    path: np.ndarray
    upper: np.ndarray
    lower: np.ndarray
    significance: float
    stable: bool
    first_crossing: int | None


def cusum(y, X, significance: float = 0.05) -> CusumResult:
    """Brown-Durbin-Evans CUSUM test of parameter stability."""
    if significance not in CUSUM_BOUNDS:
        raise NumericError(f"significance must be one of {sorted(CUSUM_BOUNDS)}")
    w = recursive_residuals(y, X)
    n = w.size
    if n > 1:
        sigma = float(np.std(w, ddof=1))
    else:
        sigma = float(abs(w[0])) or 1.0
    if sigma <= 0:
        raise NumericError("recursive residuals are constant")
    path = np.cumsum(w) / sigma
    a = CUSUM_BOUNDS[significance]
    span = np.sqrt(n)
    t = np.arange(1, n + 1)
    upper = a * (span + 2.0 * t / span)
    lower = -upper
    outside = (path > upper) | (path < lower)
    first = int(np.argmax(outside)) if outside.any() else None
    return CusumResult(
        path=path,
        upper=upper,
        lower=lower,
        significance=significance,
        stable=not outside.any(),
        first_crossing=first,
    )


@dataclass(frozen=True)
class DiagnosticsReport:
    """The full battery for one fitted model."""

    serial_correlation: TestResult
    serial_correlation_f: TestResult
    heteroscedasticity: TestResult
    normality: TestResult
    stability: CusumResult

    @property
    def tests(self) -> tuple[TestResult, ...]:
        return (
            self.serial_correlation,
            self.serial_correlation_f,
            self.heteroscedasticity,
            self.normality,
        )

    def to_dict(self) -> dict:
        out = {}
        for test in self.tests:
            out[test.name] = {
                "statistic": test.statistic,
                "distribution": test.distribution,
                "pvalue": test.pvalue,
                "reject_at_5pct": test.reject_at_5pct,
            }
        out["cusum"] = {
            "significance": self.stability.significance,
            "stable": self.stability.stable,
            "first_crossing": self.stability.first_crossing,
            "max_abs_path": float(np.max(np.abs(self.stability.path))),
        }
        return out

    def to_text(self) -> str:
        """Aligned table, one row per test plus the CUSUM verdict."""
        rows = [("test", "statistic", "reference", "p-value", "at 5%")]
        for test in self.tests:
            rows.append((
                test.name,
                f"{test.statistic:.4f}",
                test.distribution,
                f"{test.pvalue:.4f}",
                "reject" if test.reject_at_5pct else "ok",
            ))
        peak = float(np.max(np.abs(self.stability.path)))
        rows.append((
            "cusum",
            f"{peak:.4f}",
            f"{self.stability.significance:.0%} band",
            "",
            "stable" if self.stability.stable else "unstable",
        ))
        widths = [max(len(r[i]) for r in rows) for i in range(5)]
        lines = []
        for i, row in enumerate(rows):
            lines.append("  ".join(c.ljust(widths[j]) for j, c in enumerate(row)).rstrip())
            if i == 0:
                lines.append("-" * len(lines[0]))
        return "\n".join(lines)


def diagnostics_report(fit: OlsFit, lags: int) -> DiagnosticsReport:
    """Run the whole battery against one fit."""
    return DiagnosticsReport(
        serial_correlation=breusch_godfrey(fit, lags),
        serial_correlation_f=durbin_alternative(fit, lags),
        heteroscedasticity=breusch_pagan(fit),
        normality=jarque_bera(fit.residuals),
        stability=cusum(fit.y, fit.design),
    )
