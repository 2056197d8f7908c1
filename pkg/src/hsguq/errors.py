"""Exception types shared across the package."""


class InadmissibleStateError(ValueError):
    """A state left the hyperbolicity set where the algorithm needs it inside.

    ``cell`` and ``node`` locate the offending point when known; ``state`` is
    the offending state vector.
    """

    def __init__(self, message, cell=None, node=None, state=None, kind="inadmissible"):
        super().__init__(message)
        self.cell = cell
        self.node = node
        self.state = state
        self.kind = kind


class ClosureDomainError(InadmissibleStateError):
    """M1 closure requested outside ``|m1/m0| <= 1`` or with ``m0 <= 0``."""

    def __init__(self, message, cell=None, node=None, state=None):
        super().__init__(message, cell=cell, node=node, state=state, kind="closure_domain")


class ConvergenceError(RuntimeError):
    """An iterative solver hit its iteration cap."""

    def __init__(self, message, cell=None, residual=None):
        super().__init__(message)
        self.cell = cell
        self.residual = residual


class ConfigError(ValueError):
    """Invalid run configuration."""


class GridMismatchError(ValueError):
    """Two results live on different grids."""
