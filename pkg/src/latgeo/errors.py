"""Exception types shared across the package."""


class LatticeError(Exception):
    """Base class for all latgeo errors."""


class SingularMatrixError(LatticeError):
    """Basis determinant too small to normalize or invert."""


class NotPositiveDefiniteError(LatticeError):
    """A Gram matrix failed the positive-definiteness check."""


class CapacityError(LatticeError):
    """Short-vector enumeration exceeded the configured vector cap."""


class IllConditionedProjectorError(LatticeError):
    """The restriction of the form to the expanded subspace is numerically singular."""


class NoEventError(LatticeError):
    """The deformation flow found no crossing before the horizon cap."""


class OrderNotFoundError(LatticeError):
    """An automorphism did not return to the identity within the probe limit."""


class ReductionError(LatticeError):
    """An iterative reduction exceeded its iteration cap."""
