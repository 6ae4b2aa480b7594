"""Exception hierarchy for narxiv.

Every recoverable failure raised by the toolkit derives from NarxivError so
callers (and the CLI) can distinguish numerical failures from plain bugs.
"""


class NarxivError(Exception):
    """Base class for all toolkit errors."""


class InvalidIntervalError(NarxivError, ValueError):
    """Lower endpoint above upper endpoint."""


class NonFiniteError(NarxivError, ValueError):
    """NaN or infinite value where a finite real is required."""


class IntervalOverflowError(NarxivError, OverflowError):
    """An interval operation produced a non-finite endpoint."""


class IntervalDivisionError(NarxivError, ZeroDivisionError):
    """Division by an interval that contains zero."""


class DimensionMismatchError(NarxivError, ValueError):
    """Incompatible shapes in an interval matrix/vector operation."""


class SingularMatrixError(NarxivError):
    """Midpoint matrix is numerically singular; no preconditioner exists."""


class VerificationFailedError(NarxivError):
    """Enclosure iteration did not certify a solution box."""


class RankDeficientError(NarxivError):
    """Regressor matrix does not have full column rank."""


class InsufficientDataError(NarxivError, ValueError):
    """Record too short for the requested lags."""


class DivergenceError(NarxivError):
    """Simulation produced a non-finite value; carries the failing step."""

    def __init__(self, message: str, step: int):
        super().__init__(message)
        self.step = step


class ZeroDenominatorError(NarxivError, ZeroDivisionError):
    """RMSE denominator is zero (constant measured output)."""


class ContainmentError(NarxivError):
    """Internal invariant violation: a point escaped its enclosure."""


class ModelFileError(NarxivError, ValueError):
    """Malformed model or structure file."""
