"""Exception types raised by qpolar."""


class InvalidState(ValueError):
    """A state violates a normalization, positivity or hermiticity invariant."""


class ParseError(ValueError):
    """A state document could not be parsed."""


class Unsupported(ValueError):
    """The requested construction does not exist for the given parameters."""


class OutsideRegion(ValueError):
    """A point lies outside the admissible three-photon amplitude region."""
