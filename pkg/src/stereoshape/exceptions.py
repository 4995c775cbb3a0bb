"""Exception hierarchy shared across the package."""


class StereoShapeError(Exception):
    """Base class for all errors raised by stereoshape."""


class InvalidInputError(StereoShapeError, ValueError):
    """Malformed, non-finite or wrongly shaped input."""


class FocalPlaneError(InvalidInputError):
    """A scene point has a zero depth coordinate and cannot be projected."""


class DegenerateViewError(InvalidInputError):
    """A transformed configuration leaves the focal-plane-free class."""


class SizeLimitError(InvalidInputError):
    """Exhaustive enumeration requested on a structure that is too large."""


class SamplerFailure(StereoShapeError, RuntimeError):
    """Rejection sampling did not produce a valid draw in the attempt budget."""
