"""
Exception hierarchy for the TRK toolkit.
"""

from typing import Optional


class TRKError(Exception):
    """Base class for every error raised by the toolkit."""


class InvalidArgumentError(TRKError, ValueError):
    """Bad argument: wrong dimension, out-of-range option, unknown name."""


class DuplicatePointError(InvalidArgumentError):
    """Two design points coincide after normalization."""


class UnderdeterminedBasisError(InvalidArgumentError):
    """Regression basis has more functions than design points."""


class IllConditionedCorrelationError(TRKError, ArithmeticError):
    """Cholesky failed for every nugget on the ladder."""


class SingularRegressionError(TRKError, ArithmeticError):
    """F^T R^-1 F is rank deficient."""


class SingularConfigurationError(TRKError, ArithmeticError):
    """A response function was evaluated at its pole."""


class FitFailedError(TRKError, RuntimeError):
    """No feasible theta was found during the pattern search."""

    def __init__(self, message: str, diagnostic: Optional[str] = None):
        super().__init__(message)
        self.diagnostic = diagnostic


class TuningFailedError(TRKError, RuntimeError):
    """Every GSCV candidate was infeasible."""


class ModelFormatError(TRKError, ValueError):
    """Model document is malformed or truncated."""


class ModelVersionError(ModelFormatError):
    """Model document was written by an incompatible format version."""
