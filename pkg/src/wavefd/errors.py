class WaveFDError(Exception):
    """Base class for errors raised by wavefd."""


class CFLViolation(WaveFDError, ValueError):
    """Courant number outside ``[zeta, 1 - xi]``."""


class InstabilityError(WaveFDError, ArithmeticError):
    """A solve or error norm produced non-finite values."""


class QuadratureError(WaveFDError, ArithmeticError):
    """Adaptive quadrature did not converge within its budget."""


class ConfigError(WaveFDError, ValueError):
    """Invalid run configuration."""
