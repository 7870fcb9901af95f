"""Exception types shared across the package."""


class TmcoptError(Exception):
    """Base class for all package-specific errors."""


class ConfigError(TmcoptError):
    """Invalid configuration file or parameter value."""


class InvertedElementError(TmcoptError):
    """An element reached det(F) <= 0 at a quadrature point."""

    def __init__(self, element, message=None):
        self.element = int(element)
        super().__init__(message or f"element {element} inverted (det F <= 0)")


class LinearSolveError(TmcoptError):
    """Direct sparse solve failed (singular or badly scaled matrix)."""


class NonlinearSolveError(TmcoptError):
    """Newton iteration failed to converge within an increment.

    Carries the partial analysis history so callers can dump diagnostics.
    """

    def __init__(self, message, increment=None, residual=None, history=None):
        self.increment = increment
        self.residual = residual
        self.history = history
        super().__init__(message)


class OptimizationError(TmcoptError):
    """Redesign loop aborted; carries the last design for post-mortem."""

    def __init__(self, message, design=None, iteration=None):
        self.design = design
        self.iteration = iteration
        super().__init__(message)
