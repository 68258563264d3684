"""Exception hierarchy shared across the package."""


class RQLabError(Exception):
    """Base class for all package-specific failures."""


class ConfigError(RQLabError):
    """Invalid user-supplied configuration (CLI exit code 1)."""


class SolverError(RQLabError):
    """Numerical failure in spectrum scanning or eigenfunction extraction."""


class DegenerateSystemError(SolverError):
    """Boundary-condition matrix has an identically vanishing row."""


class NonSimpleEigenvalueError(SolverError):
    """Two near-zero pivots: eigenvalue looks multiple, refusing to guess."""


class RitzConditioningError(SolverError):
    """Mass matrix lost positive definiteness in floating point; lower K."""


class IdentityViolationError(RQLabError):
    """An identity check failed (CLI exit code 3)."""
