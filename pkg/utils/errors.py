"""
Exception types raised by the simulator.

Invalid arguments are reported with the builtin ValueError; the types below
cover failures that only show up while a model is being evaluated.
"""
from typing import Optional


class SimulationError(Exception):
    """Base class for simulator failures."""


class IntegrationError(SimulationError):
    """Norm drift beyond the hard limit, or non-finite amplitudes, during integration."""

    def __init__(self, message: str, step: Optional[int] = None, drift: Optional[float] = None):
        super().__init__(message)
        self.step = step
        self.drift = drift


class ModelInconsistencyError(SimulationError):
    """Analytic and numerical decay rates disagree: the discretization is too coarse."""


class OracleError(SimulationError):
    """The dense oracle refused the instance or its eigendecomposition failed."""
