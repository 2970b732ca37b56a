"""Exception hierarchy shared by all modules."""


class ConvexError(Exception):
    """Base class for every error raised by convexid."""


class InvalidDirection(ConvexError, ValueError):
    pass


class InvalidParams(ConvexError, ValueError):
    pass


class DegenerateScale(ConvexError, ValueError):
    pass


class DegenerateBody(ConvexError, ValueError):
    pass


class DimensionMismatch(ConvexError, ValueError):
    pass


class DimensionUnsupported(ConvexError, ValueError):
    pass


class ArityMismatch(ConvexError, ValueError):
    pass


class UnsupportedOperandPair(ConvexError, TypeError):
    pass


class OriginNotInterior(ConvexError, ValueError):
    pass


class DomainViolation(ConvexError, ValueError):
    """A point or body touches or crosses the defining hyperplane of a map."""


class AffineMapHasNoCanonicalForm(ConvexError, ValueError):
    pass


class NoWitnessPoint(ConvexError):
    """Raised when the first body is contained in the second one.

    This is the success case of an inclusion test, not a failure.
    """


class CapDegenerate(ConvexError):
    pass


class WitnessSearchFailed(ConvexError):
    def __init__(self, message, last_ratio=None):
        super().__init__(message)
        self.last_ratio = last_ratio


class MeasuredComparisonFailed(ConvexError):
    pass


class NoViolationExists(ConvexError):
    pass


class SymmetryRequired(ConvexError, ValueError):
    pass
