"""Exception types shared across the package."""


class SimulationError(Exception):
    """Base class for all errors raised by this package."""


class InvalidParameterError(SimulationError, ValueError):
    """A rate, scale, or configuration value is out of its admissible range."""


class MeshError(SimulationError, ValueError):
    """Mesh construction or mesh/field compatibility failure."""


class SolverFailure(SimulationError, RuntimeError):
    """Linear solve did not converge within the iteration budget.

    Attributes
    ----------
    residual : float
        Relative residual at abort time.
    iterations : int
        Iterations spent.
    step_index : int or None
        Time-step index, attached by the driver when available.
    """

    def __init__(self, message, residual=float("nan"), iterations=0, step_index=None):
        super().__init__(message)
        self.residual = residual
        self.iterations = iterations
        self.step_index = step_index


class EmptyRegionError(SimulationError, ValueError):
    """A geometric observable was requested for an empty thresholded region."""


class ConfigError(SimulationError, ValueError):
    """Config file rejected; carries the offending line number when known."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
