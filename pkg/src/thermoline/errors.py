"""Exception hierarchy shared by all thermoline modules."""


class ThermolineError(Exception):
    """Base class for every error raised by this package."""


class DomainError(ThermolineError, ValueError):
    """An argument lies outside the mathematical domain of a function."""


class UnsupportedOrderError(ThermolineError, ValueError):
    """A Bessel order outside the supported range was requested."""


class ConvergenceError(ThermolineError, ArithmeticError):
    """An iterative method failed to reach its tolerance.

    The best available estimate and its error are kept on the exception so
    callers can decide whether to use it anyway.
    """

    def __init__(self, message, estimate=None, error_estimate=None):
        super().__init__(message)
        self.estimate = estimate
        self.error_estimate = error_estimate


class DataError(ThermolineError, ValueError):
    """Input data (samples, weights, histograms) is malformed."""


class ConfigError(ThermolineError, ValueError):
    """A run configuration is invalid; the message names the offending key."""

    def __init__(self, key, message):
        super().__init__(f"{key}: {message}")
        self.key = key
