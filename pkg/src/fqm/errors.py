"""Exception types raised across the package."""


class FQMError(ValueError):
    """Base class for all input and consistency errors."""


class NonInvertible(FQMError):
    pass


class EvenModulus(FQMError):
    pass


class OutOfRange(FQMError):
    pass


class InvalidDeterminant(FQMError):
    pass


class NotPrimePower(FQMError):
    pass


class DimensionMismatch(FQMError):
    pass


class SizeLimit(FQMError):
    pass


class DegenerateSolutionSpace(FQMError):
    """The intertwining system did not have a one-dimensional solution space."""
