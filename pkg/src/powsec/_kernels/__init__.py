"""Numeric kernels with a compiled fast path.

At import time the Cython extension ``_core`` is preferred; the NumPy
``_fallback`` module is used when the extension was not built or when
``POWSEC_PURE_PYTHON`` is set. Both expose the same functions with
identical numerical contracts (see ``benchmarks/bench_kernels.py`` for
the speed comparison).
"""

import os

if os.environ.get("POWSEC_PURE_PYTHON"):
    from . import _fallback as _impl
else:
    try:
        from . import _core as _impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _fallback as _impl

lstsq_stats = _impl.lstsq_stats
recursive_residuals = _impl.recursive_residuals
adf_stat = _impl.adf_stat


def backend():
    """Name of the active kernel backend: 'compiled' or 'fallback'."""
    return _impl.BACKEND
