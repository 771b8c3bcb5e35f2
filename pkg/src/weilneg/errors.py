"""Exception hierarchy shared across the package."""


class WeilnegError(Exception):
    """Base class for all errors raised by this package."""


class PoleError(WeilnegError, ValueError):
    """Digamma evaluated at a non-positive integer."""


class NonConvergence(WeilnegError, ArithmeticError):
    """Quadrature could not reach the requested tolerance within its budget."""

    def __init__(self, message, estimate=None, error_estimate=None):
        super().__init__(message)
        self.estimate = estimate
        self.error_estimate = error_estimate


class DegenerateSupport(WeilnegError, ValueError):
    """The test function's Fourier support contains no log(n)/2pi with n >= 2."""


class IncompleteData(WeilnegError, LookupError):
    """A coefficient needed by the explicit formula is missing."""


class DataUnavailable(WeilnegError, LookupError):
    """Neither network, cache nor fixtures can supply a record."""


class SchemaDrift(WeilnegError, ValueError):
    """A database response lacks the fields the client was configured to read."""

    def __init__(self, message, payload_path=None):
        super().__init__(message if payload_path is None
                         else f"{message} (raw payload saved to {payload_path})")
        self.payload_path = payload_path
