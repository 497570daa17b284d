"""Pure-NumPy kernels, used when the compiled extension is unavailable.

Same contracts as ``powsec._kernels._core``; the compiled module exists
only for speed on Monte Carlo workloads. Both raise ``ValueError`` on
numerical breakdown and leave input validation to callers.
"""

import math

import numpy as np

BACKEND = "fallback"


def lstsq_stats(X, y):
    """QR least squares with classical standard errors.

    Returns ``(beta, se, resid, rss)``. ``se`` entries are NaN when the
    model has no residual degrees of freedom.
    """
    X = np.ascontiguousarray(X, dtype=np.float64)
    y = np.ascontiguousarray(y, dtype=np.float64)
    nobs, k = X.shape
    q, r = np.linalg.qr(X, mode="reduced")
    z = q.T @ y
    try:
        beta = np.linalg.solve(r, z)
        rinv = np.linalg.inv(r)
    except np.linalg.LinAlgError as exc:
        raise ValueError("singular design matrix") from exc
    resid = y - X @ beta
    rss = float(resid @ resid)
    diag = np.einsum("ij,ij->i", rinv, rinv)
    dof = nobs - k
    sigma2 = rss / dof if dof > 0 else np.nan
    se = np.sqrt(sigma2 * diag)
    return beta, se, resid, rss


def recursive_residuals(X, y):
    """Standardized one-step-ahead recursive residuals w_t, t = k+1..T.

    Sequential least-squares updates (Brown-Durbin-Evans recursion); the
    initial fit uses the first k observations exactly.
    """
    X = np.ascontiguousarray(X, dtype=np.float64)
    y = np.ascontiguousarray(y, dtype=np.float64)
    nobs, k = X.shape
    if nobs <= k:
        raise ValueError("need more observations than parameters")
    x0 = X[:k]
    try:
        pmat = np.linalg.inv(x0.T @ x0)
    except np.linalg.LinAlgError as exc:
        raise ValueError(f"singular recursive update at t={k}") from exc
    beta = pmat @ (x0.T @ y[:k])
    w = np.empty(nobs - k)
    for t in range(k, nobs):
        x = X[t]
        px = pmat @ x
        f = 1.0 + float(x @ px)
        if not f > 0.0 or not np.isfinite(f):
            raise ValueError(f"singular recursive update at t={t + 1}")
        err = y[t] - float(x @ beta)
        w[t - k] = err / math.sqrt(f)
        beta = beta + px * (err / f)
        pmat = pmat - np.outer(px, px) / f
    return w


def _df_design(y, det, lags):
    """Design for the Dickey-Fuller regression with `lags` difference lags.

    Columns ordered [const?, trend?, y_{t-1}, dy_{t-1}, ..., dy_{t-lags}]
    so that nested lag candidates are column prefixes.
    """
    dy = np.diff(y)
    n = dy.size - lags
    cols = []
    if det >= 1:
        cols.append(np.ones(n))
    if det >= 2:
        cols.append(np.arange(1.0, n + 1.0))
    cols.append(y[lags : y.size - 1])
    for lag in range(1, lags + 1):
        cols.append(dy[lags - lag : dy.size - lag])
    return dy[lags:], np.column_stack(cols)


def adf_stat(y, det, maxlag, autolag):
    """Dickey-Fuller t statistic with optional AIC lag selection.

    det: 0 none, 1 constant, 2 constant+trend. When ``autolag`` is true,
    the lag order in 0..maxlag is chosen by AIC on the common sample
    trimmed by maxlag (all candidates share rows, ties go to fewer lags),
    then the statistic is recomputed on the sample trimmed by the chosen
    lag only. Returns ``(stat, lags, nobs)``.
    """
    y = np.ascontiguousarray(y, dtype=np.float64)
    if y.size - 1 - maxlag <= det + 1 + maxlag:
        raise ValueError("series too short for the requested lag order")
    lags = maxlag
    if autolag and maxlag > 0:
        dep, X = _df_design(y, det, maxlag)
        n = dep.size
        q, r = np.linalg.qr(X, mode="reduced")
        z = q.T @ dep
        ssr_full = float(dep @ dep - z @ z)
        best_aic = math.inf
        for p in range(maxlag + 1):
            j = det + 1 + p
            tail = z[j:]
            ssr = ssr_full + float(tail @ tail)
            if ssr <= 0.0:
                raise ValueError("degenerate regression (zero residual variance)")
            aic = n * math.log(ssr / n) + 2.0 * j
            if aic < best_aic:
                best_aic = aic
                lags = p
    dep, X = _df_design(y, det, lags)
    beta, se, _, _ = lstsq_stats(X, dep)
    rho_ix = det
    if not se[rho_ix] > 0.0 or not np.isfinite(se[rho_ix]):
        raise ValueError("degenerate regression (zero residual variance)")
    return float(beta[rho_ix] / se[rho_ix]), lags, dep.size
