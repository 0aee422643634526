"""Exception types shared by all modules."""


class PvZetaError(Exception):
    """Base class for library errors."""


class NotFound(PvZetaError, KeyError):
    """Unknown built-in space name."""

    def __str__(self):
        return Exception.__str__(self)


class NotEigen(PvZetaError):
    """An operator applied to a symbolic power is not a scalar multiple of it."""


class UnsupportedRank(PvZetaError):
    """The operation is implemented for rank one only."""


class IrrationalRoots(PvZetaError):
    """The b-function has roots that are not rational."""


class OutOfRange(PvZetaError):
    """The exponent lies outside the range where the integral converges."""


class QuadratureFailure(PvZetaError):
    """Numerical integration did not reach the requested tolerance."""


class NearPole(PvZetaError):
    """The evaluation point is within tolerance of a pole candidate."""

    def __init__(self, message, factor=None, distance=None):
        super().__init__(message)
        self.factor = factor
        self.distance = distance


class Inconsistent(PvZetaError):
    """Two numerical estimates that should agree do not."""


class IllConditioned(PvZetaError):
    """A least-squares system is too badly conditioned to trust."""
