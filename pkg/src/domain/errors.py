"""
Error hierarchy for the mock theta toolkit.
Every error carries the exit code the CLI maps it to.
"""

from typing import Any, Dict, Optional


class MockThetaError(Exception):
    """Base class for every failure raised by the library."""

    exit_code: int = 1

    def __init__(self, message: str, **details: Any):
        super().__init__(message)
        self.message = message
        self.details: Dict[str, Any] = details


class DomainError(MockThetaError, ValueError):
    """A precondition on the inputs was violated."""

    exit_code = 2


class ConductorOverflowError(DomainError):
    """Exponent conductor grew past the configured bound."""


class SeriesDivisionError(MockThetaError, ZeroDivisionError):
    """Divisor of a q-expansion cannot be normalized."""

    exit_code = 2


class PoleProximityError(MockThetaError):
    """A partial denominator came within the pole guard of zero."""

    exit_code = 3

    def __init__(
        self,
        message: str,
        index: Optional[int] = None,
        distance: Optional[float] = None,
        **details: Any,
    ):
        super().__init__(message, index=index, distance=distance, **details)
        self.index = index
        self.distance = distance


class SpecializationPoleError(PoleProximityError):
    """An exact specialization z = aτ/m hits a vanishing denominator."""


class BudgetExceededError(MockThetaError):
    """No cutoff within j_max meets the tail bound."""

    exit_code = 4

    def __init__(
        self,
        message: str,
        requested: Optional[int] = None,
        allowed: Optional[int] = None,
        **details: Any,
    ):
        super().__init__(message, requested=requested, allowed=allowed, **details)
        self.requested = requested
        self.allowed = allowed


class CutoffInsufficientError(BudgetExceededError):
    """A user supplied region cutoff is below the certified one."""
