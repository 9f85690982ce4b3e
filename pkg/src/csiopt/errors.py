"""Exception hierarchy for csi-opt.

Every error carries the process exit code the CLI uses for it.
"""

from typing import Any, Optional, Sequence


class CsiError(Exception):
    """Base class for all csi-opt errors."""

    exit_code = 1


class InvalidQueryError(CsiError, ValueError):
    """A query named something the election does not contain."""

    exit_code = 2


class InvalidParameterError(CsiError, ValueError):
    """A size, weight or length argument is out of range."""

    exit_code = 2


class DomainError(CsiError, LookupError):
    """A point, node or edge is outside a function's or graph's domain."""

    exit_code = 2

    def __str__(self) -> str:
        # LookupError would otherwise repr() the message
        return str(self.args[0]) if self.args else ""


class IntegrityError(CsiError, LookupError):
    """Cross references inside a social universe are dangling."""

    exit_code = 2

    def __str__(self) -> str:
        return str(self.args[0]) if self.args else ""


class ValidationFailed(CsiError, ValueError):
    """Input data violates type invariants or scenario constraints."""

    exit_code = 2

    def __init__(self, message: str, violations: Optional[Sequence[Any]] = None):
        super().__init__(message)
        self.violations = list(violations or [])


class CapacityError(CsiError):
    """An instance is larger than an exhaustive search is allowed to handle."""

    exit_code = 3

    def __init__(self, message: str, cap: int):
        super().__init__(f"{message} (cap: {cap})")
        self.cap = cap


class NumericError(CsiError, ArithmeticError):
    """An objective produced a non-finite value."""

    exit_code = 1

    def __init__(self, message: str, point: Sequence[float]):
        super().__init__(f"{message} at {list(point)}")
        self.point = tuple(float(x) for x in point)
