"""Exception types raised by relaysec."""


class DomainError(ValueError):
    """An argument lies outside the domain of the operation."""


class CapacityError(ValueError):
    """The requested enumeration is too large to run exactly."""


class ConfigError(ValueError):
    """A sweep configuration could not be parsed or validated."""


class QuadratureError(RuntimeError):
    """Numerical integration did not reach the requested tolerance."""
