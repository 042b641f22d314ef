"""
Base Strategy Interfaces

This module defines the abstract base classes for the interchangeable parts
of the solver: the closure that determines the attractor parameters and the
free-streaming transport scheme.
"""

from abc import ABC, abstractmethod
from typing import Any, Dict, Optional, Tuple

import numpy as np

from app.models.grid import MomentumGrid
from app.models.physics import ClosureResult


class ClosureStrategy(ABC):
    """
    Abstract base class for closure strategies.

    A closure maps the distributions of a batch of spatial cells to the
    Juttner parameters (n, U, beta) of their Anderson-Witting attractors.

    Attributes:
        parameters: Dictionary of strategy-specific parameters

    Example:
        >>> class MyClosure(ClosureStrategy):
        ...     def solve(self, F, grid, dt=None, beta_guess=None):
        ...         return formula_closure(F, grid)
        ...
        ...     @property
        ...     def name(self) -> str:
        ...         return "my_closure"
    """

    def __init__(self, parameters: Optional[Dict[str, Any]] = None):
        """
        Initialize the closure strategy.

        Args:
            parameters: Dictionary of strategy-specific parameters
        """
        self.parameters = parameters or {}

    @abstractmethod
    def solve(
        self,
        F: np.ndarray,
        grid: MomentumGrid,
        dt: Optional[float] = None,
        beta_guess: Optional[np.ndarray] = None,
    ) -> ClosureResult:
        """
        Determine the attractor of every row of F.

        Args:
            F: Distributions, shape (C, N)
            grid: Momentum grid
            dt: Relaxation step the attractor is used with, if any
            beta_guess: Optional per-cell warm start for the temperature

        Returns:
            ClosureResult for the batch

        Raises:
            InvalidStateError: For degenerate moments
            ClosureDomainError: If e <= 1
            MatchedClosureError: If an iterative closure diverges
        """
        pass

    @property
    @abstractmethod
    def name(self) -> str:
        """
        Get the strategy name.

        Returns:
            String identifier for the strategy
        """
        pass

    @property
    def description(self) -> str:
        """
        Get a description of what the strategy does.

        Returns:
            Human-readable description of the strategy
        """
        return self.name


class TransportStrategy(ABC):
    """
    Abstract base class for free-streaming schemes on the periodic lattice.

    Implementations advect every node column F(., k) by the displacement
    q_hat_k dt; columns are independent, so callers may split them into
    chunks.
    """

    def __init__(self, parameters: Optional[Dict[str, Any]] = None):
        self.parameters = parameters or {}

    @abstractmethod
    def advect(
        self,
        F: np.ndarray,
        velocities: np.ndarray,
        spatial_shape: Tuple[int, ...],
        L: float,
        dt: float,
    ) -> np.ndarray:
        """
        Advect node columns over one time step.

        Args:
            F: Distribution, shape (C, K) with C = prod(spatial_shape)
            velocities: Particle velocities q_hat of the K columns, shape (K, 3)
            spatial_shape: Shape of the periodic lattice, (n_x,) or (n_x, n_x, n_x)
            L: Period of the torus in every direction
            dt: Time step (may be negative)

        Returns:
            Advected distribution of the same shape
        """
        pass

    @property
    @abstractmethod
    def name(self) -> str:
        pass

    @property
    def description(self) -> str:
        return self.name
