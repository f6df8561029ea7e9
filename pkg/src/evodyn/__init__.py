"""Thermodynamics of a particle in a box in evolutionary (advance, momentum) variables."""
from .core import (
    ConvergenceError,
    DomainError,
    EvState,
    IntegrationError,
    NumericControls,
    PhysicalParams,
    Scenario,
)

__version__ = "0.1.0"

__all__ = [
    "ConvergenceError",
    "DomainError",
    "EvState",
    "IntegrationError",
    "NumericControls",
    "PhysicalParams",
    "Scenario",
]
