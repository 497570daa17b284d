"""Exception hierarchy shared across the package.

The CLI maps each branch to a distinct process exit code, so new errors
should subclass the branch that matches their failure class rather than
the root.
"""


class PowsecError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(PowsecError):
    """Malformed or inconsistent configuration (exit code 1)."""


class DataError(PowsecError):
    """Bad input data: parsing, alignment, invariant violations (exit code 2)."""


class IngestError(DataError):
    """CSV ingestion failure with file/row context."""


class NumericError(PowsecError):
    """Numerical failure: rank deficiency, degenerate regression (exit code 3)."""


class SolverError(NumericError):
    """Root finding / optimisation failure: bad bracket, non-convergence."""


class PretestRefusalError(PowsecError):
    """Bounds testing refused because a series looks I(2) or beyond (exit code 4)."""

    def __init__(self, message, offenders=()):
        super().__init__(message)
        self.offenders = tuple(offenders)
