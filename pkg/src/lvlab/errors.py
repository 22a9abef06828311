"""Domain exceptions for lvlab.

Every error carries a machine-readable ``error_code`` so the CLI can emit a
JSON record on stderr without knowing the concrete type.
"""

from typing import Any


class LVLabError(Exception):
    """Base class for all lvlab computation errors."""

    error_code = "LVLAB_ERROR"

    def __init__(self, message: str, **context: Any):
        self.message = message
        self.context = context
        super().__init__(message)

    def to_dict(self) -> dict[str, Any]:
        """Convert to a JSON-serializable record."""
        return {"detail": self.message, "error_code": self.error_code, **self.context}


class InvalidParameter(LVLabError, ValueError):
    """A documented precondition on an argument does not hold."""

    error_code = "INVALID_PARAMETER"


class CapExceeded(LVLabError):
    """A dense solver, enumeration or materialization cap was exceeded."""

    error_code = "CAP_EXCEEDED"

    def __init__(self, what: str, requested: float, limit: float):
        self.what = what
        self.requested = requested
        self.limit = limit
        super().__init__(
            f"{what}: requested {requested:g} exceeds cap {limit:g}",
            what=what,
            requested=requested,
            limit=limit,
        )


class BudgetExceeded(LVLabError):
    """An evaluation budget (tuple count, double-sum size) was exceeded."""

    error_code = "BUDGET_EXCEEDED"


class DegenerateSize(LVLabError):
    """Derived sizes (T, S) fall outside the admissible range."""

    error_code = "DEGENERATE_SIZE"


class Unsupported(LVLabError):
    """The requested parameter combination is not implemented."""

    error_code = "UNSUPPORTED"


class NoSquares(LVLabError):
    """The interval (N, 2N] contains no perfect square."""

    error_code = "NO_SQUARES"


class IntervalOutOfRange(LVLabError):
    """A short interval does not fit inside (N, 2N]."""

    error_code = "INTERVAL_OUT_OF_RANGE"


class GridTooSmall(LVLabError):
    """A DFT grid is too short to avoid cyclic wrap-around."""

    error_code = "GRID_TOO_SMALL"


class NonIntegerFrequencies(LVLabError):
    """Frequencies are not integer multiples of 2*pi."""

    error_code = "NON_INTEGER_FREQUENCIES"


class NotAnAP(LVLabError):
    """A set expected to be a symmetric arithmetic progression is not one."""

    error_code = "NOT_AN_AP"
