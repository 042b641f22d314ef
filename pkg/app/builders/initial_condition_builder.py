"""
Initial Condition Builder

This module implements the Builder Design Pattern for the initial kinetic
state of a run.
"""

import math
from typing import Optional, Tuple

import numpy as np

from app.core.exceptions import ValidationError
from app.core.logging import get_logger
from app.models.enums import InitialConditionType
from app.models.physics import JuttnerParams
from app.models.run_config import InitialConditionConfig
from app.models.state import KineticState
from app.services import special_functions
from app.services.linearization import PerturbationAnalysis
from app.services.maxwellian import evaluate_juttner, two_maxwellian
from app.utils.random_stream import profile_coefficients

logger = get_logger(__name__)


class InitialConditionBuilder:
    """
    Builder for the initial KineticState.

    Types:
        equilibrium: F = J(1, a e1, beta0) in every cell
        wave: F = J0 (1 + a (1 + cos(2 pi m x1 / L)) s(q)) with
            s = c0 + c . q_hat + c4 tanh(q0 - e0) + c5 q_hat1 q_hat2, the
            coefficients drawn from the Philox stream of the seed; the
            conserved moments of the perturbation are removed unless disabled
        two_maxwellian: F = J(1, +a e1, beta0) / 2 + J(1, -a e1, beta0) / 2

    Example:
        >>> state = (
        ...     InitialConditionBuilder(analysis)
        ...     .with_lattice((64,), 10.0)
        ...     .with_type(InitialConditionType.WAVE)
        ...     .with_amplitude(1e-3)
        ...     .with_seed(7)
        ...     .build()
        ... )

    Attributes:
        _analysis: Perturbation analysis holding J0, grid and basis
    """

    def __init__(self, analysis: PerturbationAnalysis):
        """Initialize the builder with default values."""
        self._analysis = analysis
        self._spatial_shape: Tuple[int, ...] = (1,)
        self._L: float = 1.0
        self._type = InitialConditionType.EQUILIBRIUM
        self._amplitude = 0.0
        self._mode_number = 1
        self._seed = 0
        self._project_conserved = True

    def with_lattice(self, spatial_shape: Tuple[int, ...], L: float) -> "InitialConditionBuilder":
        """
        Set the periodic lattice.

        Args:
            spatial_shape: (n_x,) or (n_x, n_x, n_x)
            L: Period of the torus

        Returns:
            Self for method chaining
        """
        self._spatial_shape = tuple(int(n) for n in spatial_shape)
        self._L = float(L)
        return self

    def with_type(self, ic_type: InitialConditionType) -> "InitialConditionBuilder":
        self._type = ic_type
        return self

    def with_amplitude(self, amplitude: float) -> "InitialConditionBuilder":
        self._amplitude = float(amplitude)
        return self

    def with_mode_number(self, mode_number: int) -> "InitialConditionBuilder":
        self._mode_number = int(mode_number)
        return self

    def with_seed(self, seed: int) -> "InitialConditionBuilder":
        self._seed = int(seed)
        return self

    def with_conserved_projection(self, enabled: bool) -> "InitialConditionBuilder":
        """
        Toggle removal of the conserved moments of the wave perturbation.

        Returns:
            Self for method chaining
        """
        self._project_conserved = bool(enabled)
        return self

    def with_config(self, ic: InitialConditionConfig) -> "InitialConditionBuilder":
        """
        Apply every setting of an initial-condition config section.

        Returns:
            Self for method chaining
        """
        return (
            self.with_type(ic.type)
            .with_amplitude(ic.amplitude)
            .with_mode_number(ic.mode_number)
            .with_seed(ic.seed)
            .with_conserved_projection(ic.project_conserved)
        )

    def _first_axis_coordinates(self) -> np.ndarray:
        n_x = self._spatial_shape[0]
        x = (np.arange(n_x) + 0.5) * (self._L / n_x)
        per_cell = int(np.prod(self._spatial_shape[1:])) if len(self._spatial_shape) > 1 else 1
        return np.repeat(x, per_cell)

    def momentum_profile(self) -> np.ndarray:
        """s(q) of the wave initial condition, shape (N,)."""
        grid = self._analysis.grid
        c = profile_coefficients(self._seed)
        e0 = special_functions.e_tilde(self._analysis.beta0)
        q_hat = grid.q_hat
        return c[0] + q_hat @ c[1:4] + c[4] * np.tanh(grid.q0 - e0) + c[5] * q_hat[:, 0] * q_hat[:, 1]

    def _wave(self) -> np.ndarray:
        analysis = self._analysis
        x1 = self._first_axis_coordinates()
        envelope = 1.0 + np.cos(2.0 * math.pi * self._mode_number * x1 / self._L)
        f = self._amplitude * envelope[:, None] * (self.momentum_profile() * analysis.sqrt_J0)[None, :]
        if self._project_conserved:
            f = analysis.project_conserved(f)
        else:
            logger.info("Conserved-moment projection disabled; the perturbation keeps its kernel component")
        return analysis.recompose(f)

    def _uniform(self, field: np.ndarray) -> np.ndarray:
        cells = int(np.prod(self._spatial_shape))
        return np.tile(field, (cells, 1))

    def build(self, beta0: Optional[float] = None) -> KineticState:
        """
        Build the initial state at t = 0.

        Raises:
            ValidationError: If the amplitude makes F negative or the drift
                is not admissible
        """
        analysis = self._analysis
        beta = analysis.beta0 if beta0 is None else float(beta0)
        drift = np.array([self._amplitude, 0.0, 0.0])

        if self._type == InitialConditionType.EQUILIBRIUM:
            F = self._uniform(evaluate_juttner(JuttnerParams(n=1.0, U=drift, beta=beta), analysis.grid))
        elif self._type == InitialConditionType.TWO_MAXWELLIAN:
            F = self._uniform(two_maxwellian(1.0, drift, beta, analysis.grid))
        else:
            F = self._wave()

        if F.min() < 0.0:
            raise ValidationError(
                f"Initial condition '{self._type.value}' is negative somewhere; reduce ic.amplitude",
                details={"key": "ic.amplitude", "min": float(F.min())},
            )
        logger.info(
            f"Built '{self._type.value}' initial condition on {self._spatial_shape} cells x {analysis.grid.size} nodes"
        )
        return KineticState(F=F, t=0.0, spatial_shape=self._spatial_shape, L=self._L)
