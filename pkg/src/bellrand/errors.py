"""Exception types raised across the package."""


class BellRandError(Exception):
    """Base class for all package errors."""


class InvalidSettingCount(BellRandError, ValueError):
    pass


class TooLargeForBruteForce(BellRandError, ValueError):
    pass


class TooLargeForDense(BellRandError, ValueError):
    pass


class DimensionMismatch(BellRandError, ValueError):
    pass


class UnsupportedPhase(BellRandError, ValueError):
    pass


class NotAnticommuting(BellRandError, ValueError):
    pass


class InsufficientCopies(BellRandError, ValueError):
    pass


class SchemeMismatch(BellRandError, ValueError):
    pass


class DomainError(BellRandError, ValueError):
    pass


class NoViolation(UserWarning):
    """Issued when a behavior does not violate the local bound.

    The randomness report is still produced, but marked as not certified.
    """
