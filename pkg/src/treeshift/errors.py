"""Exception types shared across the package.

Each class maps to one CLI exit code (see ``treeshift.cli``).
"""


class ValidationError(ValueError):
    """Malformed or out-of-range input."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class UnsupportedCase(ValidationError):
    """The requested analysis does not cover this input."""


class ConvergenceError(ArithmeticError):
    """An iteration did not reach the requested tolerance."""

    def __init__(self, message: str, width: float | None = None):
        self.width = width
        super().__init__(message)


class InfeasibleError(ValueError):
    """Brute-force enumeration refused because it would be too large."""


class ConsistencyError(ArithmeticError):
    """Two independent computations of the same quantity disagree."""
