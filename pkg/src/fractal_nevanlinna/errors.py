"""Exception hierarchy shared by all modules."""


class FractalNevanlinnaError(Exception):
    """Base class for library errors."""


class DomainError(FractalNevanlinnaError, ValueError):
    """An argument lies outside the domain of an operation."""


class RangeError(DomainError):
    """A value lies outside the range of a function being inverted."""


class SizeError(FractalNevanlinnaError, ValueError):
    """A size guard was exceeded."""


class CapabilityError(FractalNevanlinnaError):
    """The requested algorithm does not support this input."""


class DegenerateSetError(FractalNevanlinnaError):
    """No nonzero measure obeys the gauge bound on the given set."""


class PreconditionError(FractalNevanlinnaError):
    """A hypothesis of an inequality does not hold for the given data.

    ``witness`` optionally carries the point at which the check failed.
    """

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness
