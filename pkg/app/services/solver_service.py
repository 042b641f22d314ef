"""
Kinetic Solver Service

Strang-split time integration of

    dF/dt + q_hat . grad_x F = (U_mu q^mu / q0)(J(F) - F)

on a periodic lattice. Relaxation runs over chunks of spatial cells and
transport over chunks of momentum node columns; chunks are reassembled in
order, so the result does not depend on the worker count.
"""

from typing import Optional

import numpy as np
from scipy.special import xlogy

from app.core.exceptions import AwbgkException
from app.core.logging import get_logger
from app.models.grid import MomentumGrid
from app.models.state import Diagnostics, KineticState
from app.services.linearization import PerturbationAnalysis
from app.services.macroscopics import collision_frequency, formula_closure
from app.services.momentum_grid import paired_sum
from app.strategies.base_strategy import ClosureStrategy, TransportStrategy
from app.utils.validators import Validators
from app.utils.worker_pool import WorkerPool

logger = get_logger(__name__)

DEFAULT_DT_FACTOR = 0.1
CELL_CHUNK = 256
COLUMN_CHUNK = 4096


class KineticSolver:
    """
    Stepper for the relaxation model on a periodic lattice.

    Example:
        >>> solver = KineticSolver(grid, analysis, closure, transport)
        >>> state = solver.strang_step(state, dt)
        >>> record = solver.diagnostics(state)

    Attributes:
        grid: Momentum grid
        analysis: Perturbation analysis around J0 (energy functional)
        closure: Closure strategy producing the attractor per cell
        transport: Transport strategy for free streaming
        pool: Worker pool for cells and node columns
        energy_max_order: Derivative order of the energy functional
    """

    def __init__(
        self,
        grid: MomentumGrid,
        analysis: PerturbationAnalysis,
        closure: ClosureStrategy,
        transport: TransportStrategy,
        pool: Optional[WorkerPool] = None,
        energy_max_order: int = 1,
    ):
        self.grid = grid
        self.analysis = analysis
        self.closure = closure
        self.transport = transport
        self.pool = pool or WorkerPool(max_workers=1)
        self.energy_max_order = int(energy_max_order)
        logger.debug(
            f"KineticSolver ready: closure={closure.name}, transport={transport.name}, "
            f"workers={self.pool.max_workers}"
        )

    def relaxation_step(self, state: KineticState, dt: float) -> KineticState:
        """
        Exact exponential relaxation towards the frozen attractor.

        F <- J + exp(-nu dt) (F - J) per node, a convex combination of two
        non-negative fields, so positivity holds exactly.

        Raises:
            AwbgkException: Closure errors, with the global cell index in
                ``details["cell"]``
        """
        dt = Validators.validate_positive(dt, "dt")
        F = state.F
        hint = state.beta_hint

        def relax(bound: slice):
            block = F[bound]
            guess = None if hint is None else hint[bound]
            try:
                result = self.closure.solve(block, self.grid, dt=dt, beta_guess=guess)
            except AwbgkException as exc:
                if "cell" in exc.details:
                    exc.details["cell"] = int(exc.details["cell"]) + bound.start
                raise
            decay = np.exp(-collision_frequency(result.U, self.grid) * dt)
            updated = result.J + decay * (block - result.J)
            return updated, result.beta, float(result.residual.max())

        parts = self.pool.map_chunks(relax, state.cells, max_chunk=CELL_CHUNK)
        residual = max(part[2] for part in parts)
        logger.debug(f"Relaxation step at t={state.t:.6g}: max closure residual {residual:.3e}")

        return KineticState(
            F=np.concatenate([part[0] for part in parts], axis=0),
            t=state.t,
            spatial_shape=state.spatial_shape,
            L=state.L,
            step=state.step,
            beta_hint=np.concatenate([part[1] for part in parts]),
            last_residual=residual,
        )

    def transport_step(self, state: KineticState, dt: float) -> KineticState:
        """Free streaming of every node column by q_hat dt."""
        F = state.F
        velocities = self.grid.q_hat

        def stream(bound: slice) -> np.ndarray:
            return self.transport.advect(F[:, bound], velocities[bound], state.spatial_shape, state.L, dt)

        columns = self.pool.map_chunks(stream, self.grid.size, max_chunk=COLUMN_CHUNK)

        result = state.copy()
        result.F = np.concatenate(columns, axis=1)
        return result

    def strang_step(self, state: KineticState, dt: float) -> KineticState:
        """transport(dt/2), relaxation(dt), transport(dt/2); advances t by dt."""
        half = self.transport_step(state, 0.5 * dt)
        relaxed = self.relaxation_step(half, dt)
        result = self.transport_step(relaxed, 0.5 * dt)
        result.t = state.t + dt
        result.step = state.step + 1
        return result

    def entropy(self, state: KineticState) -> float:
        """H = sum dx^d sum w F ln F with 0 ln 0 = 0."""
        return state.cell_volume * float(np.sum(xlogy(state.F, state.F) @ self.grid.weights))

    def diagnostics(self, state: KineticState) -> Diagnostics:
        """Conserved totals, H, the perturbation energy and the last closure residual."""
        weights = self.grid.weights
        volume = state.cell_volume
        column_sums = state.F.sum(axis=0)
        mass = volume * float(paired_sum(column_sums * weights))
        momentum = volume * paired_sum(column_sums * weights * self.grid.nodes.T)
        energy = volume * float(paired_sum(column_sums * weights * self.grid.q0))

        f = self.analysis.decompose(state.F)
        E_f = self.analysis.energy_functional(f, state.spatial_shape, state.L, self.energy_max_order)

        return Diagnostics(
            t=state.t,
            mass=mass,
            momentum=tuple(float(value) for value in momentum),
            energy=energy,
            H=self.entropy(state),
            E_f=E_f,
            closure_residual=state.last_residual,
            min_F=float(state.F.min()),
            step=state.step,
        )

    def default_dt(self, state: KineticState) -> float:
        """0.1 / max nu over the attractors of the state."""
        result = formula_closure(state.F, self.grid)
        nu_max = float(collision_frequency(result.U, self.grid).max())
        return DEFAULT_DT_FACTOR / nu_max
