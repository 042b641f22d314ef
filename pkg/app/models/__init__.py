"""
Models module initialization.

This module contains the enums and data models used throughout the solver.
Dataclass modules (physics, grid, state, run_config) are imported directly
from their submodules.
"""

from app.models.enums import (
    CheckModule,
    ClosureMode,
    ExitCode,
    InitialConditionType,
    TransportScheme,
)

__all__ = [
    "CheckModule",
    "ClosureMode",
    "ExitCode",
    "InitialConditionType",
    "TransportScheme",
]
