"""Exception types shared across the package."""


class DomainError(ValueError):
    """A parameter lies outside the domain where a quantity is defined."""


class GridError(ValueError):
    """A radial grid fails validation (ordering, spacing, size)."""


class QuadratureError(RuntimeError):
    """Adaptive quadrature could not reach the requested tolerance."""

    def __init__(self, message: str, achieved: float):
        super().__init__(f"{message} (achieved error estimate {achieved:.3e})")
        self.achieved = achieved


class ConvergenceError(RuntimeError):
    """The consistency root-finder failed from every start point."""

    def __init__(self, message: str, best_residual: float, start: tuple[float, float] | None):
        super().__init__(f"{message}; best residual {best_residual:.3e} from start {start}")
        self.best_residual = best_residual
        self.start = start


class ConfigurationError(ValueError):
    """Invalid configuration handed to the verification suite."""
