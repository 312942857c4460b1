from typing import Optional, Tuple


class LatticeError(ValueError):
    """
    Base class for every error raised by latnoether.

    Args:
        message: Human readable description
        location: Optional pointer to the offending input (file, JSON path,
            generator name or word)
    """

    def __init__(self, message: str, location: Optional[str] = None):
        super().__init__(message)
        self.message = message
        self.location = location

    def __str__(self) -> str:
        if self.location:
            return f"{self.message} (at {self.location})"
        return self.message


class ConfigError(LatticeError):
    pass


class NonAssociative(LatticeError):
    pass


class ClosureExceedsCap(LatticeError):
    pass


class RelationViolated(LatticeError):
    pass


class CapExceeded(LatticeError):
    pass


class NotNormal(LatticeError):
    pass


class NotUnimodular(LatticeError):
    pass


class GroupMismatch(LatticeError):
    pass


class ActionNotTrivialOnKernel(LatticeError):
    pass


class KernelNotStable(LatticeError):
    pass


class UnverifiedAction(LatticeError):
    pass


class NotOddPrime(LatticeError):
    pass


class IsoCheckFailed(LatticeError):
    pass


class NotC2(LatticeError):
    pass


class BasisSearchExhausted(LatticeError):
    """Raised when no Reiner basis was produced; the counts are still attached."""

    def __init__(self, message: str, counts: Tuple[int, int, int], location: Optional[str] = None):
        super().__init__(message, location)
        self.counts = counts


class UnknownName(LatticeError):
    pass


class InternalFlabbyCheckFailed(LatticeError):
    pass


class ParseError(LatticeError):
    pass


class ValidationError(LatticeError):
    pass
