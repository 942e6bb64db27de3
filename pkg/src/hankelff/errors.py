"""Exception types shared across the package."""

from __future__ import annotations


class HankelffError(Exception):
    pass


class NotPrime(HankelffError, ValueError):
    pass


class NotIrreducible(HankelffError, ValueError):
    pass


class DegreeMismatch(HankelffError, ValueError):
    pass


class FieldMismatch(HankelffError, ValueError):
    pass


class DivisionByZero(HankelffError, ZeroDivisionError):
    pass


class ShapeMismatch(HankelffError, ValueError):
    pass


class NotCoprime(HankelffError, ValueError):
    pass


class BoundViolation(HankelffError, ValueError):
    """Raised when n (or a degree) lies outside the range where a construction can exist."""


class NotApplicable(HankelffError, ValueError):
    pass


class BudgetExceeded(HankelffError, RuntimeError):
    pass


class ExtensionFieldUnsupported(HankelffError, ValueError):
    pass


class PrimeMismatch(HankelffError, ValueError):
    pass


class SchemaMismatch(HankelffError, ValueError):
    pass


class CacheIOError(HankelffError, OSError):
    """A cache location could not be read or written; ``path`` names it."""

    def __init__(self, path, reason: str = ""):
        self.path = str(path)
        super().__init__(f"{self.path}: {reason}" if reason else self.path)
