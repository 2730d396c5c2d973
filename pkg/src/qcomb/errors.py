"""Exception hierarchy for the qcomb package."""


class QcombError(Exception):
    """Base class for all qcomb errors."""


class ValidationError(QcombError):
    """A spec or parameter violates its invariants."""


class DeltaPumpError(QcombError):
    """A monochromatic (delta) pump was point-evaluated.

    Delta pumps are never sampled; use the 1D reduction
    (``biphoton.assemble_jsa_mono``) instead.
    """


class ResolutionError(QcombError):
    """A grid or delay axis is too coarse to resolve a feature."""


class DegenerateStateError(QcombError):
    """An assembled state has zero norm."""


class GridSymmetryError(QcombError):
    """An operation requiring a symmetric grid got an asymmetric one."""


class OverFilteredError(QcombError):
    """A spectral filter removed essentially all of the state."""


class UndefinedVisibilityError(QcombError):
    """Visibility is undefined (zero baseline)."""


class NonConvergenceError(QcombError):
    """No optimizer start converged. Carries the best-effort result."""

    def __init__(self, message, best_result=None):
        super().__init__(message)
        self.best_result = best_result


class ConfigError(QcombError):
    """A configuration document is malformed or inconsistent."""


class DataFormatError(QcombError):
    """An input data file has a malformed row."""
