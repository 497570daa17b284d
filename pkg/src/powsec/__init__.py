"""powsec: proof-of-work security economics toolkit.

Mining-equilibrium and attack-deterrence models plus the ARDL
bounds-testing pipeline (unit-root pretests, lag selection, bounds
cointegration test, error-correction form, diagnostics), with a
config-driven CLI (`powsec ingest|analyze|simulate|attack`).
"""

from ._kernels import backend as kernel_backend
from .errors import (
    ConfigError,
    DataError,
    IngestError,
    NumericError,
    PowsecError,
    PretestRefusalError,
    SolverError,
)

__version__ = "0.1.0"

__all__ = [
    "kernel_backend",
    "PowsecError",
    "ConfigError",
    "DataError",
    "IngestError",
    "NumericError",
    "SolverError",
    "PretestRefusalError",
    "__version__",
]
