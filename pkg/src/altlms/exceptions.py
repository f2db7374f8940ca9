"""Exception types raised by the toolkit."""


class InvalidArgument(ValueError):
    """An argument violates the documented preconditions."""


class NumericFault(ArithmeticError):
    """A filter received non-finite data.

    Parameters
    ----------
    message : str
        Description of the fault.
    iteration : int
        Index of the time step at which the fault was detected.
    """

    def __init__(self, message, iteration):
        super().__init__(f"{message} (iteration {iteration})")
        self.iteration = iteration


class UnstableConfiguration(ValueError):
    """A step size lies at or above its stability bound."""

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class ConfigError(ValueError):
    """A scenario configuration could not be parsed or validated."""

    def __init__(self, message, line=None, key=None):
        where = []
        if line is not None:
            where.append(f"line {line}")
        if key is not None:
            where.append(f"key '{key}'")
        prefix = f"{', '.join(where)}: " if where else ""
        super().__init__(prefix + message)
        self.line = line
        self.key = key
