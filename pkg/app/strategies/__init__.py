"""
Strategies module initialization.

This module contains strategy pattern implementations for the closure and
the transport scheme of the solver.
"""

from app.strategies.base_strategy import ClosureStrategy, TransportStrategy
from app.strategies.closure_strategies import FormulaClosure, MatchedClosure
from app.strategies.transport_strategies import SpectralTransport, UpwindTransport

__all__ = [
    "ClosureStrategy",
    "TransportStrategy",
    "FormulaClosure",
    "MatchedClosure",
    "SpectralTransport",
    "UpwindTransport",
]
