"""Exception hierarchy shared by all modules."""


class NearbyCyclesError(Exception):
    """Base class for every error raised by the package."""


class InvalidInput(NearbyCyclesError, ValueError):
    """Parameters rejected before any computation starts."""


class NotPrime(InvalidInput):
    pass


class EvenCharacteristic(InvalidInput):
    pass


class DegenerateDegree(InvalidInput):
    pass


class NotAUnit(InvalidInput):
    pass


class EpsilonMismatch(InvalidInput):
    pass


class TooLarge(NearbyCyclesError):
    """A scale guard refused to run an enumeration."""


class VerificationFailure(NearbyCyclesError, AssertionError):
    """An internal consistency check failed. Always signals a bug."""


class DivisibilityViolation(VerificationFailure):
    pass


class ClassificationMismatch(VerificationFailure):
    pass


class InvariantViolation(VerificationFailure):
    pass


class PageMismatch(VerificationFailure):
    pass
