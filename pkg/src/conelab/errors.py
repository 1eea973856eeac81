"""Exception hierarchy.

``InputError`` covers malformed descriptors and dimension mismatches; every
other subclass of ``ConeError`` is a violated mathematical precondition or a
failed numerical certificate.
"""


class ConeError(Exception):
    """Base class for all conelab errors."""


class InputError(ConeError, ValueError):
    """Malformed descriptor, unknown variant or dimension mismatch."""


class DimensionError(InputError):
    pass


class PreconditionError(ConeError, ValueError):
    """A point or map does not satisfy an operation's precondition."""


class BracketError(ConeError):
    """Bisection could not bracket its root below the doubling cap."""


class NonSmoothError(PreconditionError):
    """More than one supporting state where a unique one is required."""


class SingularElementError(PreconditionError):
    pass


class LinearizationError(ConeError):
    """Assembled Gateaux linearization failed its self-consistency checks."""


class FitError(ConeError):
    pass


class IdentityCheckError(ConeError, AssertionError):
    """A numeric identity that must hold exactly failed beyond tolerance."""
