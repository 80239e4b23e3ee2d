"""Exception types shared across the package."""


class InputError(ValueError):
    """Malformed arguments or data (dimension mismatch, out-of-range values)."""


class PriceParseError(InputError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class InfeasibleError(RuntimeError):
    """No schedule satisfies the comfort zone and load limits.

    ``step`` names the offending step for the inelastic solve, ``hour`` the
    simulated hour for rolling runs; ``scenario`` carries the window that
    failed.
    """

    def __init__(self, message, scenario=None, step=None, hour=None):
        super().__init__(message)
        self.scenario = scenario
        self.step = step
        self.hour = hour
