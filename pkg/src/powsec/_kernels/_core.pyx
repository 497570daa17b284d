"""Compiled kernels: QR least squares, recursive residuals, DF statistic.

Same contracts as ``_fallback``; LAPACK is reached through SciPy's
Cython bindings, and the sequential recursive-least-squares loop runs
in C. Numerical agreement with the fallback is checked by the parity
tests in tests/test_kernels.py.
"""

import numpy as np

cimport cython
cimport numpy as cnp
from libc.math cimport isfinite, log, sqrt
from scipy.linalg.cython_lapack cimport dgeqrf, dormqr, dpotrf, dpotri, dtrtri

from ._fallback import _df_design

cnp.import_array()

BACKEND = "compiled"


cdef int _qr_factor(double[::1, :] a, double[::1] tau) except -1:
    cdef int m = a.shape[0], n = a.shape[1], info = 0, lwork = -1
    cdef double probe = 0.0
    dgeqrf(&m, &n, &a[0, 0], &m, &tau[0], &probe, &lwork, &info)
    lwork = <int> probe
    work = np.empty(max(lwork, 1), dtype=np.float64)
    cdef double[::1] workv = work
    dgeqrf(&m, &n, &a[0, 0], &m, &tau[0], &workv[0], &lwork, &info)
    if info != 0:
        raise ValueError(f"dgeqrf failed with info={info}")
    return 0


cdef int _apply_qt(double[::1, :] a, double[::1] tau, double[::1] b) except -1:
    cdef char *side = b"L"
    cdef char *trans = b"T"
    cdef int m = a.shape[0], k = a.shape[1], nrhs = 1, info = 0, lwork = -1
    cdef double probe = 0.0
    dormqr(side, trans, &m, &nrhs, &k, &a[0, 0], &m, &tau[0], &b[0], &m,
           &probe, &lwork, &info)
    lwork = <int> probe
    work = np.empty(max(lwork, 1), dtype=np.float64)
    cdef double[::1] workv = work
    dormqr(side, trans, &m, &nrhs, &k, &a[0, 0], &m, &tau[0], &b[0], &m,
           &workv[0], &lwork, &info)
    if info != 0:
        raise ValueError(f"dormqr failed with info={info}")
    return 0


@cython.boundscheck(False)
@cython.wraparound(False)
cdef int _backsolve(double[::1, :] a, double[::1] z, double[::1] beta) except -1:
    cdef int k = a.shape[1]
    cdef int i, j
    cdef double s
    for i in range(k - 1, -1, -1):
        if a[i, i] == 0.0:
            raise ValueError("singular design matrix")
        s = z[i]
        for j in range(i + 1, k):
            s -= a[i, j] * beta[j]
        beta[i] = s / a[i, i]
    return 0


@cython.boundscheck(False)
@cython.wraparound(False)
cdef int _rinv_row_norms(double[::1, :] a, double[::1] diag) except -1:
    """Overwrite the leading triangle with R^-1 and fill row norms squared."""
    cdef char *uplo = b"U"
    cdef char *unit = b"N"
    cdef int m = a.shape[0], k = a.shape[1], info = 0
    dtrtri(uplo, unit, &k, &a[0, 0], &m, &info)
    if info != 0:
        raise ValueError("singular design matrix")
    cdef int i, j
    cdef double s
    for i in range(k):
        s = 0.0
        for j in range(i, k):
            s += a[i, j] * a[i, j]
        diag[i] = s
    return 0


def lstsq_stats(X, y):
    """QR least squares with classical standard errors (see _fallback)."""
    Xarr = np.asarray(X, dtype=np.float64)
    if Xarr.ndim != 2:
        raise ValueError("X must be 2-d")
    A = np.array(Xarr, dtype=np.float64, order="F", copy=True)  # dgeqrf works in place
    yc = np.ascontiguousarray(y, dtype=np.float64)
    cdef int m = A.shape[0], k = A.shape[1]
    if yc.shape[0] != m:
        raise ValueError("X and y lengths differ")
    b = yc.copy()
    tau = np.empty(k, dtype=np.float64)
    beta = np.empty(k, dtype=np.float64)
    diag = np.empty(k, dtype=np.float64)
    cdef double[::1, :] av = A
    cdef double[::1] tv = tau, bv = b, betav = beta, dv = diag
    _qr_factor(av, tv)
    _apply_qt(av, tv, bv)
    _backsolve(av, bv, betav)
    resid = yc - Xarr @ beta
    cdef double rss = float(resid @ resid)
    _rinv_row_norms(av, dv)
    cdef int dof = m - k
    sigma2 = rss / dof if dof > 0 else np.nan
    se = np.sqrt(sigma2 * diag)
    return beta, se, resid, rss


@cython.boundscheck(False)
@cython.wraparound(False)
def recursive_residuals(X, y):
    """Standardized one-step-ahead recursive residuals (see _fallback)."""
    Xc = np.ascontiguousarray(X, dtype=np.float64)
    yc = np.ascontiguousarray(y, dtype=np.float64)
    cdef int nobs = Xc.shape[0], k = Xc.shape[1]
    if nobs <= k:
        raise ValueError("need more observations than parameters")
    x0 = Xc[:k]
    gram = np.asfortranarray(x0.T @ x0)
    cdef double[::1, :] gv = gram
    cdef char *uplo = b"L"
    cdef int info = 0, kk = k
    dpotrf(uplo, &kk, &gv[0, 0], &kk, &info)
    if info != 0:
        raise ValueError(f"singular recursive update at t={k}")
    dpotri(uplo, &kk, &gv[0, 0], &kk, &info)
    if info != 0:
        raise ValueError(f"singular recursive update at t={k}")
    pmat = np.asarray(gram)
    pmat = np.tril(pmat) + np.tril(pmat, -1).T  # symmetrize from the lower triangle
    beta = pmat @ (x0.T @ yc[:k])
    w = np.empty(nobs - k, dtype=np.float64)
    px = np.empty(k, dtype=np.float64)
    cdef const double[:, ::1] Xv = Xc
    cdef const double[::1] yv = yc
    cdef double[:, ::1] Pv = np.ascontiguousarray(pmat)
    cdef double[::1] wv = w, betav = np.ascontiguousarray(beta), pxv = px
    cdef int t, i, j
    cdef double f, err, coef, s
    for t in range(k, nobs):
        f = 1.0
        for i in range(k):
            s = 0.0
            for j in range(k):
                s += Pv[i, j] * Xv[t, j]
            pxv[i] = s
            f += Xv[t, i] * s
        if not (f > 0.0) or not isfinite(f):
            raise ValueError(f"singular recursive update at t={t + 1}")
        err = yv[t]
        for i in range(k):
            err -= Xv[t, i] * betav[i]
        wv[t - k] = err / sqrt(f)
        coef = err / f
        for i in range(k):
            betav[i] += pxv[i] * coef
        for i in range(k):
            for j in range(k):
                Pv[i, j] -= pxv[i] * pxv[j] / f
    return w


def adf_stat(y, det, maxlag, autolag):
    """Dickey-Fuller t statistic with optional AIC lag selection (see _fallback)."""
    yv = np.ascontiguousarray(y, dtype=np.float64)
    cdef int det_c = det, maxlag_c = maxlag
    if yv.shape[0] - 1 - maxlag_c <= det_c + 1 + maxlag_c:
        raise ValueError("series too short for the requested lag order")
    cdef int lags = maxlag_c
    cdef int n, kcols, p, j
    cdef double ssr_full, ssr, aic, best_aic
    if autolag and maxlag_c > 0:
        dep, design = _df_design(yv, det_c, maxlag_c)
        A = np.array(design, dtype=np.float64, order="F", copy=True)
        b = np.ascontiguousarray(dep).copy()
        n = A.shape[0]
        kcols = A.shape[1]
        tau = np.empty(kcols, dtype=np.float64)
        _qr_factor(A, tau)
        _apply_qt(A, tau, b)
        z2 = np.square(b[:kcols])
        ssr_full = float(dep @ dep) - float(z2.sum())
        tail = float(z2.sum())
        best_aic = np.inf
        for p in range(maxlag_c + 1):
            j = det_c + 1 + p
            ssr = ssr_full + float(z2[j:].sum())
            if ssr <= 0.0:
                raise ValueError("degenerate regression (zero residual variance)")
            aic = n * log(ssr / n) + 2.0 * j
            if aic < best_aic:
                best_aic = aic
                lags = p
    dep, design = _df_design(yv, det_c, lags)
    beta, se, _, _ = lstsq_stats(design, dep)
    rho_ix = det_c
    if not se[rho_ix] > 0.0 or not np.isfinite(se[rho_ix]):
        raise ValueError("degenerate regression (zero residual variance)")
    return float(beta[rho_ix] / se[rho_ix]), lags, dep.shape[0]
