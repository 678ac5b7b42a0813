"""Exception hierarchy.

Capacity errors (the sieve, residue enumeration or a direct sum would need
more than the configured limits) share the base class :class:`CapacityError`
so the command line can map them to a single exit code.
"""


class CubicLMomentError(Exception):
    pass


class NotPrimaryizable(CubicLMomentError, ValueError):
    """Zero, or an element divisible by 1 - omega."""


class UndefinedGCD(CubicLMomentError, ValueError):
    pass


class NotPrime(CubicLMomentError, ValueError):
    pass


class CapacityError(CubicLMomentError):
    pass


class ResidueSystemTooLarge(CapacityError):
    pass


class SieveCapacity(CapacityError):
    pass


class FactorizationUnavailable(CapacityError):
    pass


class DirectSumTooLarge(CapacityError):
    pass
