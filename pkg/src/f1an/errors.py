"""Exception types shared by every module."""


class F1AnError(Exception):
    """Base class for all library errors."""


class InvalidNorm(F1AnError):
    pass


class InvalidElement(F1AnError):
    pass


class InvalidRadii(F1AnError):
    pass


class Unbounded(F1AnError):
    """A map sends a norm-zero element to a nonzero-norm element."""


class TooLarge(F1AnError):
    """An enumeration or symbolic expansion exceeds its configured cap."""


class Unsupported(F1AnError):
    pass


class TagMismatch(F1AnError):
    """Operands belong to different rings, lattices or primes."""


class DivisionByZero(F1AnError, ZeroDivisionError):
    pass


class PrecisionExhausted(F1AnError):
    """A p-adic quantity is not determined at the working precision."""


class LatticeOverflow(F1AnError):
    """An exponent falls outside the declared denominator lattice."""


class CounterexampleFound(F1AnError):
    """A mathematical check failed; ``witness`` describes the failing input."""

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class NotBounded(CounterexampleFound):
    pass


class InternalError(F1AnError):
    """An internal invariant was breached; indicates a library bug."""
