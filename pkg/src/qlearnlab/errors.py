"""Exception types raised across the package."""


class LabError(Exception):
    """Base class for all errors raised by qlearnlab."""


class InvalidDimensionError(LabError, ValueError):
    pass


class InvalidSpecError(LabError, ValueError):
    pass


class ValidationError(LabError, ValueError):
    pass


class ResourceLimitError(LabError):
    """Requested object would exceed the dense-simulation caps."""


class InvalidTaskError(LabError, ValueError):
    pass


class ConvergenceError(LabError, RuntimeError):
    """Iterative routine did not converge; caller should retry with a new seed."""


class UnstableEstimateError(LabError, ArithmeticError):
    pass


class DegenerateError(LabError, ValueError):
    pass


class ConfigError(LabError, ValueError):
    pass
