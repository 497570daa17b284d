"""Ordinary least squares with classical inference.

The solve goes through an orthogonal decomposition (QR in the kernel
layer); normal equations appear only as a test oracle. The AIC follows
the T*ln(SSR/T) + 2k convention used for lag selection throughout, which
differs from 2k - 2*loglik by an additive constant only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .. import _kernels
from ..errors import NumericError


@dataclass(frozen=True)
class OlsFit:
    """Fitted regression; keeps the design for downstream diagnostics."""

    names: tuple[str, ...]
    params: np.ndarray
    stderr: np.ndarray
    tstats: np.ndarray
    residuals: np.ndarray
    fitted: np.ndarray
    ssr: float
    rsquared: float
    rsquared_adj: float
    loglike: float
    aic: float
    nobs: int
    nparams: int
    design: np.ndarray
    y: np.ndarray
    has_intercept: bool

    def coef(self, name: str) -> float:
        return float(self.params[self._index(name)])

    def se(self, name: str) -> float:
        return float(self.stderr[self._index(name)])

    def tstat(self, name: str) -> float:
        return float(self.tstats[self._index(name)])

    def _index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise NumericError(f"no regressor named {name!r}; have {list(self.names)}") from None

    @property
    def dof_resid(self) -> int:
        return self.nobs - self.nparams


def add_intercept(X: np.ndarray) -> np.ndarray:
    X = np.atleast_2d(np.asarray(X, dtype=np.float64))
    return np.column_stack([np.ones(X.shape[0]), X])


def _rank_check(X: np.ndarray, names) -> None:
    nobs, k = X.shape
    svals = np.linalg.svd(X, compute_uv=False)
    tol = svals[0] * max(nobs, k) * np.finfo(np.float64).eps
    rank = int((svals > tol).sum())
    if rank < k:
        # name the most suspicious columns via the QR diagonal
        r = np.linalg.qr(X, mode="r")
        diag = np.abs(np.diag(r))
        scale = diag.max() if diag.max() > 0 else 1.0
        bad = [names[i] for i in range(k) if diag[i] <= scale * max(nobs, k) * 1e-12]
        if not bad:
            bad = [names[i] for i in np.argsort(diag)[: k - rank]]
        raise NumericError(f"design matrix is rank deficient; collinear columns: {bad}")


def ols(y, X, names=None, intercept: bool = True) -> OlsFit:
    """Least-squares fit of y on X, optionally prepending a constant.

    Raises on rank deficiency (naming the collinear columns) and when
    there are no residual degrees of freedom.
    """
    y = np.asarray(y, dtype=np.float64).ravel()
    X = np.atleast_2d(np.asarray(X, dtype=np.float64))
    if X.shape[0] != y.size:
        raise NumericError(f"X has {X.shape[0]} rows but y has {y.size}")
    if intercept:
        X = add_intercept(X)
        base = list(names) if names is not None else [f"x{i}" for i in range(1, X.shape[1])]
        names = ["const"] + base
    else:
        names = list(names) if names is not None else [f"x{i}" for i in range(X.shape[1])]
    nobs, k = X.shape
    if len(names) != k:
        raise NumericError(f"{len(names)} names for {k} columns")
    if nobs <= k:
        raise NumericError(f"need more observations ({nobs}) than parameters ({k})")
    _rank_check(X, names)
    beta, se, resid, ssr = _kernels.lstsq_stats(X, y)
    fitted = y - resid
    if intercept or "const" in names:
        tss = float(((y - y.mean()) ** 2).sum())
    else:
        tss = float((y**2).sum())
    rsq = 1.0 - ssr / tss if tss > 0 else 1.0
    rsq_adj = 1.0 - (1.0 - rsq) * (nobs - 1) / (nobs - k)
    sigma2_mle = ssr / nobs
    if sigma2_mle > 0:
        loglike = -0.5 * nobs * (math.log(2.0 * math.pi * sigma2_mle) + 1.0)
        aic = nobs * math.log(sigma2_mle) + 2.0 * k
    else:
        loglike = math.inf
        aic = -math.inf
    with np.errstate(divide="ignore", invalid="ignore"):
        tstats = np.where(se > 0, beta / se, np.nan)
    return OlsFit(
        names=tuple(names),
        params=beta,
        stderr=se,
        tstats=tstats,
        residuals=resid,
        fitted=fitted,
        ssr=ssr,
        rsquared=rsq,
        rsquared_adj=rsq_adj,
        loglike=loglike,
        aic=aic,
        nobs=nobs,
        nparams=k,
        design=X,
        y=y,
        has_intercept=intercept or "const" in names,
    )
