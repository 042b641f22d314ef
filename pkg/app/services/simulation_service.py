"""
Simulation Service Implementation

Runs one simulation from a validated RunConfig: builds the grid, the
perturbation analysis, the closure and transport strategies and the initial
state, steps to t_end and writes the output directory

    config.echo.json   the run configuration as given
    diagnostics.csv    one row per output step, flushed as the run goes
    summary.json       deterministic results (drift, decay fit)
    runtime.json       wall-clock time and worker count
    last_state.npz     last valid state, only when a step fails
"""

import math
import os
import time
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from app.builders.initial_condition_builder import InitialConditionBuilder
from app.builders.summary_builder import SummaryBuilder
from app.core.config import Config
from app.core.exceptions import AwbgkException
from app.core.logging import get_logger
from app.factories.strategy_factory import ClosureFactory, TransportFactory
from app.models.run_config import RunConfig, TimeConfig, load_config
from app.models.state import Diagnostics, KineticState, drift_report
from app.services.diagnostics_writer import DiagnosticsWriter
from app.services.linearization import PerturbationAnalysis, fit_decay
from app.services.momentum_grid import build_grid, check_resolution, default_q_max
from app.services.solver_service import KineticSolver
from app.utils.file_utils import FileUtils
from app.utils.worker_pool import WorkerPool

logger = get_logger(__name__)

CONFIG_ECHO_FILE = "config.echo.json"
DIAGNOSTICS_FILE = "diagnostics.csv"
SUMMARY_FILE = "summary.json"
RUNTIME_FILE = "runtime.json"
LAST_STATE_FILE = "last_state.npz"


@dataclass
class SimulationResult:
    """
    Outcome of a completed run.

    Attributes:
        state: Final state
        history: Diagnostics records in step order
        summary: Content of summary.json
        output_dir: Directory holding the outputs
        dt: Time step used
        steps: Number of steps taken
    """

    state: KineticState
    history: List[Diagnostics] = field(repr=False)
    summary: Dict[str, Any] = field(repr=False)
    output_dir: str
    dt: float
    steps: int

    def series(self, name: str) -> np.ndarray:
        """One diagnostics column as an array, e.g. ``series("E_f")``."""
        return np.array([record.to_row()[name] for record in self.history])


class SimulationService:
    """
    Service running simulations described by a RunConfig.

    Example:
        >>> service = SimulationService(config)
        >>> run_config = service.load('configs/examples/wave.json')
        >>> result = service.run(run_config, output_dir='outputs/wave')

    Attributes:
        config: Application configuration
        pool: Worker pool shared by every run of this service
    """

    def __init__(self, config: Config, pool: Optional[WorkerPool] = None):
        """
        Initialize SimulationService with configuration.

        Args:
            config: Application configuration instance
            pool: Optional worker pool (default: AW_THREADS / workers.max_workers)
        """
        self.config = config
        self.pool = pool or WorkerPool(max_workers=config.max_workers())
        self.defaults = config.get_section("defaults") or {}
        self.newton_parameters = {
            "max_iter": config.get("numerics.newton.max_iter", 50),
            "tol": config.get("numerics.newton.tol", 1.0e-11),
        }

    def load(self, path: str) -> RunConfig:
        """Read a run configuration, filling omitted keys from the application defaults."""
        return load_config(path, self.defaults)

    def prepare(self, run_config: RunConfig) -> Tuple[KineticSolver, KineticState]:
        """
        Build the solver and the initial state of a run.

        Returns:
            (solver, initial state)

        Raises:
            ValidationError: If the initial condition is not admissible
        """
        beta0 = run_config.physics.beta0
        grid_config = run_config.grid
        q_max = grid_config.q_max if grid_config.q_max is not None else default_q_max(beta0)
        grid = build_grid(q_max, grid_config.n_axis)
        check_resolution(grid, beta0, run_config.physics.tol_grid)

        scheme = run_config.scheme
        analysis = PerturbationAnalysis(beta0, grid, closure_mode=scheme.closure_mode)
        solver = KineticSolver(
            grid,
            analysis,
            closure=ClosureFactory.create(scheme.closure_mode, self.newton_parameters),
            transport=TransportFactory.create(scheme.transport),
            pool=self.pool,
            energy_max_order=run_config.analysis.energy_max_order,
        )
        state = (
            InitialConditionBuilder(analysis)
            .with_lattice(grid_config.spatial_shape, grid_config.L)
            .with_config(run_config.ic)
            .build()
        )
        return solver, state

    @staticmethod
    def time_grid(time_config: TimeConfig, solver: KineticSolver, state: KineticState) -> Tuple[float, int]:
        """
        Step size and count reaching t_end exactly.

        The requested (or default) dt is shrunk uniformly so that an integer
        number of steps lands on t_end.
        """
        requested = time_config.dt if time_config.dt is not None else solver.default_dt(state)
        steps = max(1, math.ceil(time_config.t_end / requested - 1e-9))
        dt = time_config.t_end / steps
        if not math.isclose(dt, requested, rel_tol=1e-12):
            logger.info(f"Time step adjusted from {requested:.6g} to {dt:.6g} ({steps} steps to t_end)")
        return dt, steps

    def _echo_config(self, run_config: RunConfig, output_dir: str) -> None:
        destination = os.path.join(output_dir, CONFIG_ECHO_FILE)
        if run_config.source_path:
            FileUtils.copy_verbatim(run_config.source_path, destination)
        else:
            FileUtils.write_json(destination, run_config.to_dict())

    def _write_runtime(self, output_dir: str, started: float) -> None:
        FileUtils.write_json(
            os.path.join(output_dir, RUNTIME_FILE),
            {"wall_seconds": time.perf_counter() - started, "workers": self.pool.max_workers},
        )

    def run(self, run_config: RunConfig, output_dir: Optional[str] = None) -> SimulationResult:
        """
        Run a simulation to t_end and write the output directory.

        Args:
            run_config: Validated run configuration
            output_dir: Overrides output.directory

        Returns:
            SimulationResult

        Raises:
            AwbgkException: Any step error, after the last valid state and a
                failed summary have been written
        """
        started = time.perf_counter()
        output_dir = FileUtils.ensure_directory(output_dir or run_config.output.directory)
        self._echo_config(run_config, output_dir)

        solver, state = self.prepare(run_config)
        dt, steps = self.time_grid(run_config.time, solver, state)
        output_every = run_config.time.output_every
        logger.info(
            f"Starting run: {steps} steps of dt={dt:.6g} on {state.spatial_shape} cells x "
            f"{solver.grid.size} nodes, closure={solver.closure.name}, transport={solver.transport.name}"
        )

        writer = DiagnosticsWriter(os.path.join(output_dir, DIAGNOSTICS_FILE), run_config.output.float_format)
        history: List[Diagnostics] = []

        def record(current: KineticState) -> None:
            entry = solver.diagnostics(current)
            history.append(entry)
            writer.append(entry)

        try:
            record(state)
            for step in range(1, steps + 1):
                state = solver.strang_step(state, dt)
                if step % output_every == 0 or step == steps:
                    record(state)
        except AwbgkException as exc:
            saved = state.save(os.path.join(output_dir, LAST_STATE_FILE))
            logger.error(f"Run aborted at t={state.t:.6g} (step {state.step}): {exc.message}; state saved to {saved}")
            summary = (
                SummaryBuilder()
                .with_status("failed")
                .with_config(run_config.to_dict())
                .with_steps(state.step, dt, state.t)
                .with_drift(drift_report(history))
                .with_decay_fit(None)
                .with_error({**exc.to_dict(), "last_state": LAST_STATE_FILE})
                .build()
            )
            FileUtils.write_json(os.path.join(output_dir, SUMMARY_FILE), summary)
            self._write_runtime(output_dir, started)
            raise

        fit = fit_decay([r.t for r in history], [r.E_f for r in history], run_config.analysis.fit_fraction)
        drift = drift_report(history)
        summary = (
            SummaryBuilder()
            .with_status("completed")
            .with_config(run_config.to_dict())
            .with_steps(steps, dt, state.t)
            .with_drift(drift)
            .with_decay_fit(fit)
            .with_extra("max_closure_residual", max(r.closure_residual for r in history))
            .with_extra("min_F", min(r.min_F for r in history))
            .build()
        )
        FileUtils.write_json(os.path.join(output_dir, SUMMARY_FILE), summary)
        self._write_runtime(output_dir, started)

        logger.info(
            f"Run completed: t={state.t:.6g}, drift mass {drift['mass']:.3e} momentum {drift['momentum']:.3e} "
            f"energy {drift['energy']:.3e}"
            + (f", fitted E_f rate {fit.rate:.6g} (R^2 {fit.r2:.4f})" if fit else "")
        )
        return SimulationResult(
            state=state, history=history, summary=summary, output_dir=output_dir, dt=dt, steps=steps
        )
