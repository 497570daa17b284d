"""Least squares, inference distributions, and the diagnostic battery."""

from .distributions import chi2_sf, f_sf, reg_beta_inc, reg_gamma_lower, reg_gamma_upper
from .ols import OlsFit, add_intercept, ols
from .diagnostics import (
    CusumResult,
    DiagnosticsReport,
    TestResult,
    breusch_godfrey,
    breusch_pagan,
    cusum,
    diagnostics_report,
    durbin_alternative,
    jarque_bera,
    recursive_residuals,
)
from .montecarlo import replicate

__all__ = [
    "chi2_sf",
    "f_sf",
    "reg_beta_inc",
    "reg_gamma_lower",
    "reg_gamma_upper",
    "OlsFit",
    "ols",
    "add_intercept",
    "TestResult",
    "CusumResult",
    "DiagnosticsReport",
    "breusch_godfrey",
    "durbin_alternative",
    "breusch_pagan",
    "jarque_bera",
    "recursive_residuals",
    "cusum",
    "diagnostics_report",
    "replicate",
]
