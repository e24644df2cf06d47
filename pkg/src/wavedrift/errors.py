"""Exception hierarchy shared by the solver, the kinematics and the CLI."""


class WaveError(Exception):
    """Base class for all package errors."""


class DomainError(WaveError, ValueError):
    """An argument lies outside the domain of a function."""


class StagnationError(WaveError):
    """A flow reaches u = c (h_p <= 0 or unbounded) somewhere."""

    def __init__(self, message, location=None):
        super().__init__(message)
        self.location = location


class SolverError(WaveError):
    """Newton or continuation failure."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class NoBifurcationError(WaveError):
    pass


class OutsideFluidError(DomainError):
    pass


class ConfigError(WaveError):
    def __init__(self, message, key=None):
        super().__init__(message)
        self.key = key
