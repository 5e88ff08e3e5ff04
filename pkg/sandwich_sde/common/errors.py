"""
Exception hierarchy shared by every sandwich_sde module.

The CLI maps ``ConfigError`` and ``InvalidArgumentError`` to exit code 2 and every
other ``SandwichError`` to exit code 1.
"""

from typing import Optional


class SandwichError(Exception):
    """Base class for all errors raised by sandwich_sde."""


class InvalidArgumentError(SandwichError, ValueError):
    """An argument is outside the documented domain of an operation."""


class AssumptionViolationError(InvalidArgumentError):
    """A drift model breaks one of the structural assumptions (A1)-(A5) / (B1)-(B5)."""

    def __init__(self, assumption: str, message: str):
        self.assumption = assumption
        super().__init__(f"({assumption}) {message}")


class DomainError(SandwichError, ValueError):
    """Evaluation at a point where the quantity is not defined."""

    def __init__(self, message: str, index: Optional[int] = None):
        self.index = index
        if index is not None:
            message = f"{message} (node {index})"
        super().__init__(message)


class NumericError(SandwichError, ArithmeticError):
    """Non-finite values appeared during a computation."""

    def __init__(self, message: str, index: Optional[int] = None):
        self.index = index
        if index is not None:
            message = f"{message} (node {index})"
        super().__init__(message)


class ConsistencyError(SandwichError, RuntimeError):
    """An internal invariant did not hold, e.g. a root-finding bracket failed."""


class PathFormatError(SandwichError, ValueError):
    """A sample-path file could not be parsed."""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ConfigError(SandwichError, ValueError):
    """A run configuration could not be loaded or validated."""
