"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain an operation accepts."""


class InvariantError(RuntimeError):
    """A numerical invariant was violated beyond rounding tolerance.

    Raised when a result cannot be explained by floating point error, e.g. a
    Gram matrix with a clearly negative eigenvalue.
    """
