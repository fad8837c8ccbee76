"""Exception types shared across the package."""


class AsnrLabError(Exception):
    """Base class for all package errors."""


class ConfigError(AsnrLabError, ValueError):
    """Invalid user-supplied configuration (bad grid, eta, sigma, ...)."""


class NumericError(AsnrLabError, RuntimeError):
    """A numeric procedure failed (root finder, span too small, ...)."""


class SpanTooSmallError(NumericError):
    """Voigt convolution span truncates the profile too aggressively."""


class WidthSolveError(NumericError):
    """Voigt width-parameter bisection did not converge."""
