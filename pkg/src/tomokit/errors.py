"""Exception hierarchy.

Everything numeric raises a subclass of TomokitError so the CLI can map
failures onto its exit-code contract (usage errors exit 2, numeric failures
exit 3) without string matching.
"""

__all__ = [
    "TomokitError",
    "PoleError",
    "NonConvergenceError",
    "QuadratureError",
    "DegenerateFrameError",
    "UnsupportedFrameError",
    "UnsupportedModelError",
    "DivergentNormalizerError",
    "FrameMismatchError",
    "DescriptorError",
    "EstimationError",
    "TruncationWarning",
]


class TomokitError(Exception):
    """Base class for all library errors."""


class PoleError(TomokitError, ArithmeticError):
    """Gamma function evaluated at a nonpositive integer."""


class NonConvergenceError(TomokitError, ArithmeticError):
    """A series did not reach its tolerance within the term budget, or lost
    too many digits to cancellation to certify the requested accuracy."""


class QuadratureError(TomokitError, ArithmeticError):
    """A quadrature rule could not meet its target on the given domain."""


class DegenerateFrameError(TomokitError, ValueError):
    """Frame with mu == nu == 0 where a tomogram value was requested."""


class UnsupportedFrameError(TomokitError, ValueError):
    """A closed form does not exist at this frame (e.g. the half-line
    oscillator forms need nu != 0); callers should fall back to quadrature."""


class UnsupportedModelError(TomokitError, TypeError):
    """The requested operation has no closed form for this state model."""


class DivergentNormalizerError(TomokitError, ArithmeticError):
    """An exponential-family normalizer integral diverges at the requested
    natural parameter, so the spec is not a pdf there."""


class FrameMismatchError(TomokitError, ValueError):
    """An empirical characteristic function was queried at a frame other
    than the one its samples were drawn in."""


class DescriptorError(TomokitError, ValueError):
    """A state or provider descriptor string does not parse."""


class EstimationError(TomokitError, ValueError):
    """Density estimation preconditions violated (empty range, zero
    variance, too few samples)."""


class TruncationWarning(UserWarning):
    """A lattice or integration domain visibly truncates its integrand."""
