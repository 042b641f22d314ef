"""
Tests for the Kinetic Solver

This module contains unit tests for the relaxation and transport steps,
Strang splitting, the entropy and the diagnostics.
"""

import math

import numpy as np
import pytest

from app.builders.initial_condition_builder import InitialConditionBuilder
from app.core.exceptions import ConvergenceError, MatchedClosureError, ValidationError
from app.factories.strategy_factory import ClosureFactory, TransportFactory
from app.models.enums import ClosureMode, InitialConditionType, TransportScheme
from app.models.physics import JuttnerParams
from app.models.state import KineticState
from app.services.linearization import PerturbationAnalysis
from app.services.maxwellian import evaluate_juttner, two_maxwellian
from app.services.momentum_grid import build_grid
from app.services.solver_service import KineticSolver
from app.strategies.base_strategy import ClosureStrategy
from app.utils.worker_pool import WorkerPool


@pytest.fixture(scope="module")
def analysis():
    """Perturbation analysis on a small grid."""
    return PerturbationAnalysis(1.0, build_grid(10.0, 12))


def make_solver(analysis, closure=ClosureMode.MATCHED, transport=TransportScheme.SPECTRAL, pool=None, parameters=None):
    return KineticSolver(
        analysis.grid,
        analysis,
        ClosureFactory.create(closure, parameters),
        TransportFactory.create(transport),
        pool=pool,
    )


def wave_state(analysis, n_x=8, amplitude=1e-2, seed=3):
    return (
        InitialConditionBuilder(analysis)
        .with_lattice((n_x,), 2.0 * math.pi)
        .with_type(InitialConditionType.WAVE)
        .with_amplitude(amplitude)
        .with_seed(seed)
        .build()
    )


def relative_drift(first, last):
    momentum = np.max(np.abs(np.subtract(last.momentum, first.momentum))) / first.energy
    return max(abs(last.mass / first.mass - 1.0), momentum, abs(last.energy / first.energy - 1.0))


class TestRelaxationStep:
    """Test cases for relaxation_step."""

    def test_equilibrium_stationary(self, analysis):
        """Test that a uniform drifting Juttner state does not move."""
        solver = make_solver(analysis)
        F = evaluate_juttner(JuttnerParams(n=1.0, U=np.array([0.1, 0.0, 0.0]), beta=1.0), analysis.grid)
        state = KineticState(F=np.tile(F, (4, 1)), t=0.0, spatial_shape=(4,), L=1.0)
        initial = state.F.copy()
        for _ in range(5):
            state = solver.strang_step(state, 0.1)

        assert np.max(np.abs(state.F - initial)) / np.max(initial) < 1e-11
        assert state.step == 5
        assert state.t == pytest.approx(0.5)

    def test_entropy_non_increasing(self, analysis):
        """Test that H never grows along relaxation steps."""
        solver = make_solver(analysis)
        F = two_maxwellian(1.0, 0.5, 1.0, analysis.grid)
        state = KineticState(F=F[None, :], t=0.0, spatial_shape=(1,), L=1.0)
        H = [solver.entropy(state)]
        for _ in range(10):
            state = solver.relaxation_step(state, 0.5)
            H.append(solver.entropy(state))

        assert np.all(np.diff(H) <= 1e-12)
        assert H[-1] < H[0]

    def test_relaxation_conserves(self, analysis):
        """Test that matched relaxation conserves mass, momentum and energy."""
        solver = make_solver(analysis)
        F = two_maxwellian(1.0, 0.5, 1.0, analysis.grid)
        state = KineticState(F=np.tile(F, (2, 1)), t=0.0, spatial_shape=(2,), L=1.0)
        first = solver.diagnostics(state)
        relaxed = solver.relaxation_step(state, 1.0)

        assert relative_drift(first, solver.diagnostics(relaxed)) < 1e-10
        assert relaxed.last_residual <= 1e-11
        assert relaxed.beta_hint.shape == (2,)

    def test_long_step_reaches_attractor(self, analysis):
        """Test that F tends to its attractor for nu dt >> 1."""
        solver = make_solver(analysis)
        F = two_maxwellian(1.0, 0.3, 1.0, analysis.grid)
        state = KineticState(F=F[None, :], t=0.0, spatial_shape=(1,), L=1.0)
        relaxed = solver.relaxation_step(state, 200.0)
        again = solver.relaxation_step(relaxed, 200.0)

        assert np.max(np.abs(again.F - relaxed.F)) / relaxed.F.max() < 1e-10

    def test_positivity(self, analysis):
        """Test that F stays non-negative for a strongly non-equilibrium state."""
        solver = make_solver(analysis)
        F = two_maxwellian(1.0, 0.8, 1.0, analysis.grid)
        state = KineticState(F=np.tile(F, (4, 1)), t=0.0, spatial_shape=(4,), L=1.0)
        state = solver.strang_step(state, 1.0)

        assert state.F.min() >= 0.0

    def test_invalid_step_raises_error(self, analysis):
        """Test that a non-positive dt is rejected."""
        solver = make_solver(analysis)
        state = wave_state(analysis, n_x=2)

        with pytest.raises(ValidationError):
            solver.relaxation_step(state, 0.0)

    def test_closure_failure_reports_global_cell(self, analysis):
        """Test that closure errors carry the global cell index."""
        solver = make_solver(analysis, parameters={"max_iter": 0})
        state = wave_state(analysis, n_x=4)

        with pytest.raises(MatchedClosureError) as exc_info:
            solver.relaxation_step(state, 0.1)

        assert 0 <= exc_info.value.details["cell"] < 4

    def test_closure_failure_without_cell_left_unattributed(self, analysis):
        """Test that errors without a cell index do not get one from the chunk offset."""

        class FailingClosure(ClosureStrategy):
            def solve(self, F, grid, dt=None, beta_guess=None):
                raise ConvergenceError("temperature inversion stalled", details={"e": 1.5})

            @property
            def name(self):
                return "failing"

            @property
            def description(self):
                return "Always fails"

        transport = TransportFactory.create(TransportScheme.SPECTRAL)
        solver = KineticSolver(analysis.grid, analysis, FailingClosure(), transport)

        with pytest.raises(ConvergenceError) as exc_info:
            solver.relaxation_step(wave_state(analysis, n_x=4), 0.1)

        assert "cell" not in exc_info.value.details


class TestStrangStep:
    """Test cases for the split scheme."""

    def test_wave_conservation(self, analysis):
        """Test machine-level conservation of a wave run."""
        solver = make_solver(analysis)
        state = wave_state(analysis)
        first = solver.diagnostics(state)
        for _ in range(20):
            state = solver.strang_step(state, 0.1)

        assert relative_drift(first, solver.diagnostics(state)) < 1e-10

    def test_upwind_conservation(self, analysis):
        """Test conservation with the upwind transport."""
        solver = make_solver(analysis, transport=TransportScheme.UPWIND)
        state = wave_state(analysis)
        first = solver.diagnostics(state)
        for _ in range(10):
            state = solver.strang_step(state, 0.2)

        assert relative_drift(first, solver.diagnostics(state)) < 1e-10
        assert state.F.min() >= 0.0

    def test_formula_closure_drift_larger(self, analysis):
        """Test that the formula closure conserves only to grid accuracy."""
        matched = make_solver(analysis)
        formula = make_solver(analysis, closure=ClosureMode.FORMULA)
        F = two_maxwellian(1.0, 0.5, 1.0, analysis.grid)
        state = KineticState(F=F[None, :], t=0.0, spatial_shape=(1,), L=1.0)

        first = matched.diagnostics(state)
        drift_matched = relative_drift(first, matched.diagnostics(matched.relaxation_step(state, 1.0)))
        drift_formula = relative_drift(first, formula.diagnostics(formula.relaxation_step(state, 1.0)))

        assert drift_formula > drift_matched

    def test_second_order_in_time(self, analysis):
        """Test that halving dt cuts the error against a dt/4 reference by four."""
        solver = make_solver(analysis)
        initial = wave_state(analysis, n_x=8, amplitude=1e-3)
        t_end = 0.8

        def final(dt):
            state = initial
            for _ in range(int(round(t_end / dt))):
                state = solver.strang_step(state, dt)
            return state.F

        reference = final(0.025)
        errors = [np.max(np.abs(final(dt) - reference)) for dt in (0.2, 0.1)]
        order = math.log2(errors[0] / errors[1])

        assert order == pytest.approx(2.0, abs=0.3)

    def test_worker_count_independent(self, analysis):
        """Test bitwise identical results for one and several workers."""
        state = wave_state(analysis, n_x=8)
        serial = make_solver(analysis)
        with WorkerPool(max_workers=4) as pool:
            parallel = make_solver(analysis, pool=pool)
            a = serial.strang_step(serial.strang_step(state, 0.1), 0.1)
            b = parallel.strang_step(parallel.strang_step(state, 0.1), 0.1)

        assert np.array_equal(a.F, b.F)


class TestDiagnostics:
    """Test cases for diagnostics and the default time step."""

    def test_record_contents(self, analysis):
        """Test totals of a uniform equilibrium state."""
        solver = make_solver(analysis)
        F = analysis.J0
        state = KineticState(F=np.tile(F, (4, 1)), t=0.0, spatial_shape=(4,), L=2.0)
        record = solver.diagnostics(state)

        assert record.mass == pytest.approx(2.0, rel=1e-13)
        assert record.momentum == (0.0, 0.0, 0.0)
        assert record.E_f == pytest.approx(0.0, abs=1e-20)
        assert record.min_F == F.min()
        assert set(record.to_row()) >= {"t", "mass", "H", "E_f", "closure_residual"}

    def test_entropy_convention(self, analysis):
        """Test 0 ln 0 = 0 in the entropy."""
        solver = make_solver(analysis)
        F = np.zeros((1, analysis.grid.size))
        F[0, 0] = 1.0
        state = KineticState(F=F, t=0.0, spatial_shape=(1,), L=1.0)

        assert solver.entropy(state) == 0.0

    def test_default_dt(self, analysis):
        """Test dt = 0.1 / max nu, which is 0.1 at rest."""
        solver = make_solver(analysis)
        state = KineticState(F=np.tile(analysis.J0, (2, 1)), t=0.0, spatial_shape=(2,), L=1.0)

        assert solver.default_dt(state) == pytest.approx(0.1, rel=1e-12)
