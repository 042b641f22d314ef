"""
Property Check Service

Quick numerical property suites for every module, run by ``check``. Each
property measures one error quantity and compares it with a tolerance; the
report lists every measurement so failures can be inspected.
"""

import math
import traceback
from dataclasses import dataclass
from functools import lru_cache
from typing import Any, Callable, Dict, List, Optional

import numpy as np
from scipy.special import kn

from app.builders.initial_condition_builder import InitialConditionBuilder
from app.core.config import Config
from app.core.exceptions import AwbgkException, ValidationError
from app.core.logging import get_logger
from app.factories.strategy_factory import ClosureFactory, TransportFactory
from app.models.enums import CheckModule, ClosureMode, InitialConditionType, TransportScheme
from app.models.grid import MomentumGrid
from app.models.physics import MINKOWSKI, JuttnerParams
from app.models.state import KineticState
from app.services import special_functions
from app.services.linearization import KernelBasis, PerturbationAnalysis
from app.services.macroscopics import compute_moments, macro_state, matched_closure
from app.services.maxwellian import (
    evaluate_juttner,
    global_maxwellian,
    juttner_param_derivs,
    lorentz_boost,
    sqrt_global_maxwellian,
    two_maxwellian,
)
from app.services.momentum_grid import build_grid, moment, normalization_error
from app.services.solver_service import KineticSolver
from app.utils.random_stream import perturbation_stream

logger = get_logger(__name__)

CHECK_SEED = 20240601
BETA_RANGE = (0.05, 50.0)
FD_STEP = 1.0e-5

# Quick-check grids; the resolved grid meets the 1e-6 normalization tolerance
COARSE_GRID = (12.0, 16)
RESOLVED_GRID = (28.0, 140)


@dataclass
class PropertyResult:
    """
    One measured property.

    Attributes:
        module: Module the property belongs to
        name: Property name
        value: Measured error (or count)
        tolerance: Largest accepted value
        passed: value <= tolerance and no exception
        message: Error text when the measurement raised
    """

    module: str
    name: str
    value: Optional[float]
    tolerance: float
    passed: bool
    message: str = ""

    def to_dict(self) -> Dict[str, Any]:
        data = {
            "module": self.module,
            "name": self.name,
            "value": self.value,
            "tolerance": self.tolerance,
            "passed": self.passed,
        }
        if self.message:
            data["message"] = self.message
        return data


@lru_cache(maxsize=4)
def _grid(q_max: float, n_axis: int) -> MomentumGrid:
    return build_grid(q_max, n_axis)


@lru_cache(maxsize=4)
def _analysis(beta0: float, q_max: float, n_axis: int) -> PerturbationAnalysis:
    return PerturbationAnalysis(beta0, _grid(q_max, n_axis))


def _log_betas(points: int) -> np.ndarray:
    return np.geomspace(BETA_RANGE[0], BETA_RANGE[1], points)


def _relative(a: float, b: float) -> float:
    return abs(a - b) / max(abs(b), 1e-300)


class CheckService:
    """
    Service running the property suites.

    Example:
        >>> service = CheckService(config)
        >>> report = service.run('special_fn')
        >>> report['passed']

    Attributes:
        config: Application configuration
        tol_grid: Tolerance for grid-resolved continuum identities
        beta0: Reference inverse temperature of the suites
    """

    def __init__(self, config: Config):
        self.config = config
        self.tol_grid = float(config.get("numerics.tol_grid", 1.0e-6))
        self.beta0 = float(config.get("defaults.physics.beta0", 1.0))
        self._suites: Dict[CheckModule, Callable[[], List[PropertyResult]]] = {
            CheckModule.SPECIAL_FN: self._special_fn_suite,
            CheckModule.MOMENTUM_GRID: self._momentum_grid_suite,
            CheckModule.MAXWELLIAN: self._maxwellian_suite,
            CheckModule.MACROSCOPICS: self._macroscopics_suite,
            CheckModule.SOLVER: self._solver_suite,
            CheckModule.LINEARIZATION: self._linearization_suite,
        }

    @staticmethod
    def available_modules() -> List[str]:
        return CheckModule.list_all()

    def run(self, module: Optional[str] = None) -> Dict[str, Any]:
        """
        Run one suite or all of them.

        Args:
            module: Suite name; None runs every suite

        Returns:
            Report with ``passed``, ``failures`` and the per-property results

        Raises:
            ValidationError: If the module name is unknown
        """
        if module is None:
            selected = list(self._suites)
        else:
            if module not in CheckModule.list_all():
                raise ValidationError(
                    f"Unknown check module '{module}'. Available: {CheckModule.list_all()}",
                    details={"module": module},
                )
            selected = [CheckModule.from_string(module)]

        results: List[PropertyResult] = []
        for suite in selected:
            logger.info(f"Running property suite '{suite.value}'")
            results.extend(self._suites[suite]())

        failures = [r for r in results if not r.passed]
        for failure in failures:
            logger.warning(
                f"Property {failure.module}.{failure.name} failed: value {failure.value} "
                f"> tolerance {failure.tolerance} {failure.message}".rstrip()
            )
        return {
            "passed": not failures,
            "failures": len(failures),
            "modules": [suite.value for suite in selected],
            "results": [r.to_dict() for r in results],
        }

    def _measure(self, module: CheckModule, name: str, tolerance: float, func: Callable[[], float]) -> PropertyResult:
        try:
            value = float(func())
        except (AwbgkException, ArithmeticError, ValueError, np.linalg.LinAlgError) as e:
            logger.debug(traceback.format_exc())
            return PropertyResult(module.value, name, None, tolerance, False, message=str(e))
        passed = bool(np.isfinite(value) and value <= tolerance)
        return PropertyResult(module.value, name, value, tolerance, passed)

    # ------------------------------------------------------------------
    # special_fn
    # ------------------------------------------------------------------

    def _special_fn_suite(self) -> List[PropertyResult]:
        module = CheckModule.SPECIAL_FN
        betas = _log_betas(50)
        sf = special_functions

        def recurrence() -> float:
            errors = []
            for beta in betas:
                k = sf.bessel_triplet(beta)
                errors.append(abs(k.k2 - 2.0 * k.k1 / beta - k.k0) / k.k2)
            return max(errors)

        def oracle() -> float:
            errors = []
            for beta in betas[::2]:
                for order in (0, 1, 2):
                    errors.append(_relative(sf.bessel_k(order, beta), kn(order, beta)))
            return max(errors)

        def normalizer_identity() -> float:
            errors = []
            for beta in betas[::2]:
                h = FD_STEP * beta
                derivative = (sf.m_of_beta(beta + h) - sf.m_of_beta(beta - h)) / (2.0 * h)
                errors.append(_relative(-derivative / sf.m_of_beta(beta), sf.e_tilde(beta)))
            return max(errors)

        def ratio_derivative() -> float:
            errors = []
            for beta in betas[::2]:
                h = FD_STEP * beta
                derivative = (sf.k_ratio(beta + h) - sf.k_ratio(beta - h)) / (2.0 * h)
                errors.append(abs(derivative - sf.k_ratio_prime(beta)) / max(1.0, abs(derivative)))
            return max(errors)

        def monotone_violations() -> float:
            values = np.array([sf.e_tilde(beta) for beta in betas])
            return float(np.sum(values <= 1.0) + np.sum(np.diff(values) >= 0.0))

        def inversion() -> float:
            return max(_relative(sf.invert_e_tilde(sf.e_tilde(beta)), beta) for beta in betas)

        return [
            self._measure(module, "bessel_recurrence", 1e-10, recurrence),
            self._measure(module, "bessel_against_scipy_kn", 1e-9, oracle),
            self._measure(module, "normalizer_log_derivative", 1e-6, normalizer_identity),
            self._measure(module, "k_ratio_derivative", 1e-6, ratio_derivative),
            self._measure(module, "e_tilde_decreasing_above_one", 0.0, monotone_violations),
            self._measure(module, "e_tilde_inversion_round_trip", 1e-10, inversion),
        ]

    # ------------------------------------------------------------------
    # momentum_grid
    # ------------------------------------------------------------------

    def _momentum_grid_suite(self) -> List[PropertyResult]:
        module = CheckModule.MOMENTUM_GRID
        beta0 = self.beta0
        grid = _grid(*RESOLVED_GRID)
        closure = special_functions.closure_functions(beta0)
        J0 = global_maxwellian(beta0, grid)
        ratio = special_functions.k_ratio(beta0)
        q1 = grid.nodes[:, 0]

        table = {
            "one_over_q0": (lambda: moment(J0, grid, over_q0=True), ratio),
            "q0_over_q0": (lambda: moment(J0, grid, phi=grid.q0, over_q0=True), 1.0),
            "q1_squared_over_q0": (lambda: moment(J0, grid, phi=q1 * q1, over_q0=True), 1.0 / beta0),
            "q0_squared_over_q0": (
                lambda: moment(J0, grid, phi=grid.q0**2, over_q0=True),
                ratio + 3.0 / beta0,
            ),
            "q_squared": (
                lambda: moment(J0, grid, phi=np.sum(grid.nodes**2, axis=1)),
                12.0 / beta0**2 + 3.0 * ratio / beta0,
            ),
            "q0": (lambda: moment(J0, grid, phi=grid.q0), closure.e_tilde),
        }
        results = [self._measure(module, "normalization", self.tol_grid, lambda: normalization_error(grid, beta0))]
        for name, (func, expected) in table.items():
            results.append(
                self._measure(module, f"moment_{name}", self.tol_grid, lambda f=func, e=expected: _relative(f(), e))
            )

        def odd_moments() -> float:
            values = [moment(J0, grid, phi=grid.nodes[:, i], over_q0=True) for i in range(3)]
            values += [moment(J0, grid, phi=grid.nodes[:, i] * grid.q0, over_q0=True) for i in range(3)]
            return max(abs(float(v)) for v in values)

        results.append(self._measure(module, "odd_moments_exactly_zero", 0.0, odd_moments))
        return results

    # ------------------------------------------------------------------
    # maxwellian
    # ------------------------------------------------------------------

    def _maxwellian_suite(self) -> List[PropertyResult]:
        module = CheckModule.MAXWELLIAN
        grid = _grid(*COARSE_GRID)
        rng = perturbation_stream(CHECK_SEED)

        def random_boosts() -> float:
            worst = 0.0
            for _ in range(100):
                direction = rng.normal(size=3)
                U = direction / np.linalg.norm(direction) * rng.uniform(0.0, 5.0)
                four = np.concatenate([[math.sqrt(1.0 + U @ U)], U])
                boost = lorentz_boost(U)
                worst = max(worst, boost.metric_defect(), float(np.max(np.abs(boost.apply(four) - [1, 0, 0, 0]))))
            return worst

        def identity_at_rest() -> float:
            return float(np.max(np.abs(lorentz_boost(np.zeros(3)).matrix - np.eye(4))))

        def equilibrium_coincidence() -> float:
            J = evaluate_juttner(JuttnerParams(n=1.0, U=np.zeros(3), beta=self.beta0), grid)
            return float(np.max(np.abs(J - global_maxwellian(self.beta0, grid))))

        def derivative_fd() -> float:
            params = JuttnerParams(n=1.2, U=np.array([0.1, -0.05, 0.2]), beta=1.3)
            derivs = juttner_param_derivs(params, grid)
            J = evaluate_juttner(params, grid)
            scale = float(np.max(np.abs(J)))
            errors = []

            def shifted(n=params.n, U=params.U, beta=params.beta):
                return evaluate_juttner(JuttnerParams(n=n, U=np.asarray(U), beta=beta), grid)

            h = FD_STEP
            fd_n = (shifted(n=params.n + h) - shifted(n=params.n - h)) / (2 * h)
            errors.append(np.max(np.abs(fd_n - derivs.d_n)) / scale)
            for i in range(3):
                step = np.zeros(3)
                step[i] = h
                fd_u = (shifted(U=params.U + step) - shifted(U=params.U - step)) / (2 * h)
                exact = derivs.grad_U[:, i] + derivs.d_U0 * params.U[i] / params.U0
                errors.append(np.max(np.abs(fd_u - exact)) / scale)
            fd_beta = (shifted(beta=params.beta + h) - shifted(beta=params.beta - h)) / (2 * h)
            exact_beta = derivs.d_e * special_functions.e_tilde_prime(params.beta)
            errors.append(np.max(np.abs(fd_beta - exact_beta)) / scale)
            return float(max(errors))

        return [
            self._measure(module, "boost_rest_frame_and_metric", 1e-12, random_boosts),
            self._measure(module, "boost_identity_at_rest", 0.0, identity_at_rest),
            self._measure(module, "juttner_at_rest_is_global", 1e-15, equilibrium_coincidence),
            self._measure(module, "parameter_derivatives_fd", 1e-6, derivative_fd),
        ]

    # ------------------------------------------------------------------
    # macroscopics
    # ------------------------------------------------------------------

    def _macroscopics_suite(self) -> List[PropertyResult]:
        module = CheckModule.MACROSCOPICS
        grid = _grid(*COARSE_GRID)
        params = JuttnerParams(n=1.0, U=np.array([0.1, 0.0, 0.0]), beta=1.0)
        J = evaluate_juttner(params, grid)
        rng = perturbation_stream(CHECK_SEED + 1)
        perturbed = J * (1.0 + 0.01 * rng.uniform(-1.0, 1.0, size=grid.size))

        def fixed_point() -> float:
            result = matched_closure(J[None, :], grid)
            return float(
                max(
                    abs(result.n[0] - params.n),
                    np.max(np.abs(result.U[0] - params.U)),
                    abs(result.beta[0] - params.beta),
                )
            )

        def frame_identities() -> float:
            state = macro_state(perturbed, grid)
            lowered_u = MINKOWSKI @ state.u
            return float(
                max(
                    abs(state.heat_flux @ lowered_u),
                    abs(state.u @ lowered_u - 1.0),
                    abs(state.h - state.e - state.p / state.n),
                )
            )

        def matched_residual() -> float:
            return float(matched_closure(perturbed[None, :], grid).residual.max())

        def moment_linearity() -> float:
            single = compute_moments(perturbed, grid)
            double = compute_moments(2.0 * perturbed, grid)
            return float(max(np.max(np.abs(double.N - 2 * single.N)), np.max(np.abs(double.T - 2 * single.T))))

        return [
            self._measure(module, "matched_fixed_point", 1e-10, fixed_point),
            self._measure(module, "frame_identities", 1e-10, frame_identities),
            self._measure(module, "matched_residual", 1e-11, matched_residual),
            self._measure(module, "moment_linearity", 0.0, moment_linearity),
        ]

    # ------------------------------------------------------------------
    # solver
    # ------------------------------------------------------------------

    def _solver(self, analysis: PerturbationAnalysis) -> KineticSolver:
        return KineticSolver(
            analysis.grid,
            analysis,
            ClosureFactory.create(ClosureMode.MATCHED),
            TransportFactory.create(TransportScheme.SPECTRAL),
        )

    def _solver_suite(self) -> List[PropertyResult]:
        module = CheckModule.SOLVER
        analysis = _analysis(self.beta0, 10.0, 12)
        grid = analysis.grid
        solver = self._solver(analysis)

        def stationary_equilibrium() -> float:
            F = evaluate_juttner(JuttnerParams(n=1.0, U=np.array([0.1, 0.0, 0.0]), beta=1.0), grid)
            state = KineticState(F=np.tile(F, (4, 1)), t=0.0, spatial_shape=(4,), L=1.0)
            initial = state.F.copy()
            worst = 0.0
            for _ in range(5):
                state = solver.strang_step(state, 0.1)
                worst = max(worst, float(np.max(np.abs(state.F - initial)) / np.max(initial)))
            return worst

        def entropy_increase() -> float:
            F = two_maxwellian(1.0, 0.5, 1.0, grid)
            state = KineticState(F=F[None, :], t=0.0, spatial_shape=(1,), L=1.0)
            H = [solver.entropy(state)]
            for _ in range(10):
                state = solver.relaxation_step(state, 0.5)
                H.append(solver.entropy(state))
            return float(max(0.0, np.max(np.diff(H))))

        def conservation() -> float:
            state = (
                InitialConditionBuilder(analysis)
                .with_lattice((8,), 2.0 * math.pi)
                .with_type(InitialConditionType.WAVE)
                .with_amplitude(1e-2)
                .with_seed(CHECK_SEED)
                .build()
            )
            first = solver.diagnostics(state)
            for _ in range(20):
                state = solver.strang_step(state, 0.1)
            last = solver.diagnostics(state)
            momentum = np.max(np.abs(np.subtract(last.momentum, first.momentum))) / first.energy
            return float(
                max(abs(last.mass / first.mass - 1.0), momentum, abs(last.energy / first.energy - 1.0))
            )

        def positivity() -> float:
            F = two_maxwellian(1.0, 0.8, 1.0, grid)
            state = KineticState(F=np.tile(F, (4, 1)), t=0.0, spatial_shape=(4,), L=1.0)
            state = solver.strang_step(state, 1.0)
            return float(max(0.0, -state.F.min()))

        return [
            self._measure(module, "equilibrium_stationary", 1e-11, stationary_equilibrium),
            self._measure(module, "relaxation_entropy_non_increasing", 1e-12, entropy_increase),
            self._measure(module, "matched_conservation_drift", 1e-10, conservation),
            self._measure(module, "positivity", 0.0, positivity),
        ]

    # ------------------------------------------------------------------
    # linearization
    # ------------------------------------------------------------------

    def _linearization_suite(self) -> List[PropertyResult]:
        module = CheckModule.LINEARIZATION
        analysis = _analysis(self.beta0, *COARSE_GRID)
        rng = perturbation_stream(CHECK_SEED + 2)
        samples = rng.normal(size=(100, analysis.grid.size)) * analysis.sqrt_J0

        def gram() -> float:
            resolved = _grid(*RESOLVED_GRID)
            sqrt_J0 = sqrt_global_maxwellian(self.beta0, resolved)
            return KernelBasis.build(self.beta0, resolved, sqrt_J0).gram_defect()

        def dissipativity() -> float:
            Lf = analysis.linearized_L(samples)
            complement = samples - analysis.project(samples)
            lhs = analysis.inner(Lf, samples)
            rhs = -analysis.inner(complement, complement)
            return float(np.max(np.abs(lhs - rhs) / np.maximum(1.0, np.abs(rhs))))

        def idempotence() -> float:
            Pf = analysis.project(samples)
            return float(np.max(np.abs(analysis.project(Pf) - Pf)))

        def kernel_dimension() -> float:
            small = _analysis(self.beta0, 10.0, 16)
            eigenvalues = small.operator_spectrum()
            return float(abs(int(np.sum(np.abs(eigenvalues) < 1e-8)) - 5))

        def gamma_scaling() -> float:
            g = samples[0] / math.sqrt(float(analysis.inner(samples[0], samples[0])))
            ratios = []
            for eps in (1e-2, 5e-3, 2.5e-3):
                gamma = analysis.gamma_residual(analysis.recompose(eps * g))
                ratios.append(math.sqrt(float(analysis.inner(gamma, gamma))) / eps**2)
            return (max(ratios) - min(ratios)) / max(ratios)

        def density_identity() -> float:
            f = 0.01 * samples[1]
            quantities = analysis.psi_phi(f)
            n = macro_state(analysis.recompose(f), analysis.grid).n
            return abs(n - math.sqrt(1.0 + quantities.psi))

        return [
            self._measure(module, "kernel_gram_resolved", 5.0 * self.tol_grid, gram),
            self._measure(module, "dissipativity", 1e-10, dissipativity),
            self._measure(module, "projection_idempotent", 1e-10, idempotence),
            self._measure(module, "kernel_dimension", 0.0, kernel_dimension),
            self._measure(module, "gamma_quadratic_scaling", 0.15, gamma_scaling),
            self._measure(module, "density_from_psi", 1e-10, density_identity),
        ]
