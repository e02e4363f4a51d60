"""Exception types shared by the numerical modules."""


class ConfigurationError(ValueError):
    """A parameter is outside the range an operation supports."""


class DomainError(ValueError):
    """Arguments violate a mathematical precondition."""


class SizeError(ValueError):
    """A cost guard would be exceeded."""


class DataError(ValueError):
    """Not enough usable data to produce a result."""


class NumericRangeError(OverflowError):
    """A value does not fit the supported machine range."""


class PrecisionError(ArithmeticError):
    """A result could not be certified at the maximum working precision."""


class InternalError(RuntimeError):
    """A self-check on an internal quantity failed."""
