"""Exception types shared across the package."""

from __future__ import annotations


class GraphFormatError(ValueError):
    """Malformed edge-list input. ``lineno`` is 1-based when known."""

    def __init__(self, message: str, lineno: int | None = None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


class DisconnectedGraphError(ValueError):
    """Raised when an operation needs a connected graph with n >= 2."""


class NumericalError(ArithmeticError):
    """Solver failure or a result that violates its numerical contract."""
