"""Exception and warning types raised across the package."""


class CosourcingError(Exception):
    """Base class for all package errors."""


class ZeroMeanError(CosourcingError, ValueError):
    """The arrival-rate distribution has zero mean where a positive one is needed."""


class InvalidQuantileError(CosourcingError, ValueError):
    pass


class NonFiniteIntegrandError(CosourcingError, ArithmeticError):
    pass


class BracketFailureError(CosourcingError, RuntimeError):
    """No sign change found while bracketing a root."""


class NoConvergenceError(CosourcingError, RuntimeError):
    pass


class InvalidRegimeError(CosourcingError, ValueError):
    """The cost parameters put the problem outside the regime a method needs."""


class DegenerateHorizonError(CosourcingError, ValueError):
    pass


class ConfigError(CosourcingError, ValueError):
    pass


class CapReachedWarning(RuntimeWarning):
    """Threshold search hit its hard cap before the cost turned upward."""
