class NetPredictError(Exception):
    """Base class for all errors raised by netpredict."""


class DataError(NetPredictError, ValueError):
    """Malformed or unusable input data."""

    def __init__(self, message, lineno=None):
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)
        self.lineno = lineno


class NumericError(NetPredictError, ArithmeticError):
    """A quantity is mathematically undefined for the given input."""
