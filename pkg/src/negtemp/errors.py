"""Exception types shared across the package."""


class NegtempError(Exception):
    """Base class for all package errors."""


class InvalidDimensionError(NegtempError, ValueError):
    """A Hilbert-space dimension is zero, negative, or inconsistent."""


class EmbeddingError(NegtempError, ValueError):
    """Operator cannot be embedded at the requested slot."""


class ModelError(NegtempError, ValueError):
    """Physical model parameters are invalid or inconsistent."""


class SteadyStateError(NegtempError, RuntimeError):
    """Steady-state solve did not reach the requested residual."""

    def __init__(self, message: str, residual: float | None = None):
        super().__init__(message)
        self.residual = residual

    def __reduce__(self):
        return (type(self), (self.args[0], self.residual))


class NoUniqueSteadyStateError(SteadyStateError):
    """The linear system is structurally singular (no dissipation)."""


class StepSizeError(NegtempError, RuntimeError):
    """Time integration lost the trace beyond tolerance; reduce the step."""


class PositivityError(NegtempError, ValueError):
    """A density matrix has an eigenvalue below the allowed slack."""


class TruncationError(NegtempError, RuntimeError):
    """Fock-space truncation did not converge below the cap."""

    def __init__(self, message: str, last_delta: float | None = None):
        super().__init__(message)
        self.last_delta = last_delta

    def __reduce__(self):
        return (type(self), (self.args[0], self.last_delta))


class SweepError(NegtempError, RuntimeError):
    """A scenario point failed; carries the failing coordinates."""

    def __init__(self, message: str, coords: dict | None = None):
        super().__init__(message)
        self.coords = dict(coords or {})

    def __reduce__(self):
        return (type(self), (self.args[0], self.coords))


class ConfigError(NegtempError, ValueError):
    """A run configuration file is malformed or has unknown keys."""
