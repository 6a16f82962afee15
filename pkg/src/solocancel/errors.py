"""Error types shared across the package."""


class SolverError(RuntimeError):
    """Raised when a normal-equations solve fails (singular covariance)."""


class NoSignalError(RuntimeError):
    """Raised when an estimate is requested from all-zero input."""
