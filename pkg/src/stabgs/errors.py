"""Exception hierarchy shared across the package.

The CLI maps these onto process exit codes: parse/validation problems in
input files exit 2, capacity overruns exit 3, internal invariant violations
and eigensolver non-convergence exit 4 (usage errors exit 1).
"""

from __future__ import annotations

__all__ = [
    "StabgsError",
    "ParseError",
    "TableauError",
    "CapacityError",
    "DefectError",
    "ConvergenceError",
]


class StabgsError(Exception):
    """Base class for all package errors."""


class ParseError(StabgsError):
    """Malformed input text (Hamiltonian, stabilizer, or manifest files)."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class TableauError(StabgsError):
    """Invalid generator set (anticommuting or dependent input generators)."""


class CapacityError(StabgsError):
    """Request exceeds a documented size cap (statevector width, support)."""


class DefectError(StabgsError):
    """Internal invariant violated (e.g. a group element with phase +-i)."""


class ConvergenceError(StabgsError):
    """Iterative eigensolver failed to reach tolerance.

    Carries the best available estimate so callers can still report it.
    """

    def __init__(self, message: str, best_estimate: float, residual: float):
        super().__init__(message)
        self.best_estimate = best_estimate
        self.residual = residual
