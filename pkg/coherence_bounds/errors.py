class CoherenceBoundsError(ValueError):
    """Base class for domain-specific coherence and correlation errors."""


class InvalidStateError(CoherenceBoundsError):
    """Raised when a matrix is not a valid density matrix or bipartite state."""


class DimensionError(CoherenceBoundsError):
    """Raised when operator or subsystem dimensions do not line up."""


class MeasurementError(CoherenceBoundsError):
    """Raised when measurement operators are incomplete, non-orthogonal or not unitary."""


class ConvergenceError(CoherenceBoundsError):
    """Raised when the Hermitian eigensolver fails to converge."""


class ConfigurationError(CoherenceBoundsError):
    """Raised for invalid configuration values or unsupported combinations."""


class StateFileError(CoherenceBoundsError):
    """Raised when a state file is malformed; the message names the failing invariant."""
