"""Exception types raised across the toolkit."""


class DeepFriError(Exception):
    """Base class for all toolkit errors."""


class InversionOfZero(DeepFriError, ZeroDivisionError):
    pass


class FieldMismatch(DeepFriError, ValueError):
    pass


class DimensionNotOne(DeepFriError, ValueError):
    pass


class KernelNotInDomain(DeepFriError, ValueError):
    pass


class NotInImage(DeepFriError, ValueError):
    pass


class LinearDependence(DeepFriError, ValueError):
    pass


class EmptyDomain(DeepFriError, ValueError):
    pass


class QuotientPointInDomain(DeepFriError, ValueError):
    pass


class DuplicatePoint(DeepFriError, ValueError):
    pass


class DomainMismatch(DeepFriError, ValueError):
    pass


class SearchSpaceTooLarge(DeepFriError):
    """A brute-force guard tripped.

    ``guard`` names the guard and ``value``/``limit`` the offending quantity.
    """

    def __init__(self, guard, value, limit):
        self.guard = guard
        self.value = value
        self.limit = limit
        super().__init__(
            f"{guard}: {value} exceeds limit {limit} "
            "(set DEEPFRI_GUARD_OVERRIDE=1 to lift; may be very slow)"
        )


class EpsOutOfRange(DeepFriError, ValueError):
    pass


class BadDomainSize(DeepFriError, ValueError):
    pass


class MalformedTranscript(DeepFriError, ValueError):
    pass


class NonDivisible(DeepFriError, ArithmeticError):
    pass


class SubgroupUnavailable(DeepFriError, ValueError):
    pass


class TraceShapeMismatch(DeepFriError, ValueError):
    pass


class DomainSizeMismatch(DeepFriError, ValueError):
    pass


class NOutOfRange(DeepFriError, ValueError):
    pass


class DomainOverlap(DeepFriError, ValueError):
    pass


class PreconditionUnmet(DeepFriError):
    """Used as a marker in reports; experiments record it instead of raising."""
