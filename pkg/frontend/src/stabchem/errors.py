"""Exception hierarchy for the chemistry frontend."""


class StabchemError(Exception):
    """Base class for all frontend errors."""


class ParseError(StabchemError):
    """Malformed molecule file, scan block, or reference table."""


class ScfError(StabchemError):
    """Self-consistent field iteration failed to converge.

    The message carries the geometry so a failed scan point can be
    traced back to its structure.
    """


class ConvergenceError(StabchemError):
    """Iterative post-HF solver (CCSD) failed to converge."""


class CapacityError(StabchemError):
    """Determinant space or basis size exceeds a configured limit."""
