"""
Tests for the Linearization Service

This module contains unit tests for the kernel basis, the projection and
the linearized operator, the nonlinear remainder, the energy functional and
the decay fit.
"""

import math

import numpy as np
import pytest

from app.core.exceptions import RegimeError, ValidationError
from app.services.linearization import KernelBasis, PerturbationAnalysis, fit_decay
from app.services.macroscopics import macro_state
from app.services.maxwellian import global_maxwellian
from app.services.momentum_grid import build_grid, default_q_max, moment


@pytest.fixture(scope="module")
def analysis():
    """Perturbation analysis on a coarse grid at beta0 = 1."""
    return PerturbationAnalysis(1.0, build_grid(12.0, 16))


@pytest.fixture(scope="module")
def samples(analysis):
    """Random perturbations weighted by sqrt(J0)."""
    rng = np.random.default_rng(7)
    return rng.normal(size=(20, analysis.grid.size)) * analysis.sqrt_J0


class TestKernelBasis:
    """Test cases for KernelBasis."""

    def test_discrete_equilibrium(self, analysis):
        """Test that J0 integrates to one on the grid."""
        assert moment(analysis.J0, analysis.grid) == pytest.approx(1.0, rel=1e-14)

    def test_orthonormal_basis(self, analysis):
        """Test that the orthonormalized basis is orthonormal on the grid."""
        E = analysis.basis.orthonormal
        gram = np.array([[analysis.inner(E[i], E[j]) for j in range(5)] for i in range(5)])

        assert np.allclose(gram, np.eye(5), rtol=0.0, atol=1e-12)

    def test_gram_on_resolved_grid(self):
        """Test that the analytic basis is orthonormal to grid accuracy on the resolved grid."""
        grid = build_grid(28.0, 140)
        sqrt_J0 = np.sqrt(global_maxwellian(1.0, grid, normalization="discrete"))

        assert KernelBasis.build(1.0, grid, sqrt_J0).gram_defect() < 5e-6


class TestProjection:
    """Test cases for the projection and L."""

    def test_idempotent(self, analysis, samples):
        """Test P(P f) = P f."""
        Pf = analysis.project(samples)

        assert np.max(np.abs(analysis.project(Pf) - Pf)) < 1e-10

    def test_self_adjoint(self, analysis, samples):
        """Test <P f, g> = <f, P g>."""
        f, g = samples[0], samples[1]

        assert analysis.inner(analysis.project(f), g) == pytest.approx(
            analysis.inner(f, analysis.project(g)), abs=1e-12
        )

    def test_kernel_annihilated(self, analysis):
        """Test that L vanishes on the collision invariants."""
        for element in analysis.basis.analytic:
            assert np.max(np.abs(analysis.linearized_L(element))) < 1e-10

    def test_dissipative(self, analysis, samples):
        """Test <L f, f> = -|f - P f|^2 <= 0."""
        lhs = analysis.inner(analysis.linearized_L(samples), samples)
        complement = samples - analysis.project(samples)
        rhs = -analysis.inner(complement, complement)

        assert np.all(lhs <= 1e-12)
        assert np.allclose(lhs, rhs, rtol=1e-10, atol=1e-12)

    def test_spectrum(self):
        """Test that -L has a five-dimensional kernel and unit eigenvalues elsewhere."""
        small = PerturbationAnalysis(1.0, build_grid(10.0, 10))
        eigenvalues = small.operator_spectrum()

        assert int(np.sum(np.abs(eigenvalues) < 1e-8)) == 5
        assert np.allclose(eigenvalues[5:], 1.0, atol=1e-8)


class TestNonlinearRemainder:
    """Test cases for Gamma and the perturbation quantities."""

    def test_vanishes_at_equilibrium(self, analysis):
        """Test Gamma(0) = 0."""
        gamma = analysis.gamma_residual(analysis.J0)

        assert np.max(np.abs(gamma)) < 1e-9

    def test_quadratic_scaling(self, analysis, samples):
        """Test that Gamma quadruples when the perturbation doubles."""
        g = samples[0] / math.sqrt(float(analysis.inner(samples[0], samples[0])))
        norms = []
        for eps in (1e-3, 2e-3):
            gamma = analysis.gamma_residual(analysis.recompose(eps * g))
            norms.append(math.sqrt(float(analysis.inner(gamma, gamma))))

        assert 3.5 < norms[1] / norms[0] < 4.5

    def test_density_from_psi(self, analysis, samples):
        """Test n = sqrt(1 + Psi) for the Eckart density."""
        f = 0.01 * samples[1]
        quantities = analysis.psi_phi(f)
        n = macro_state(analysis.recompose(f), analysis.grid).n

        assert n == pytest.approx(math.sqrt(1.0 + quantities.psi), abs=1e-10)
        assert quantities.phi.shape == (analysis.grid.size,)

    def test_gamma1_term_shape(self, analysis, samples):
        """Test that Gamma1 is a multiple of sqrt(J0)."""
        term = analysis.gamma1_term(0.01 * samples[2])
        ratio = term / analysis.sqrt_J0

        assert np.allclose(ratio, ratio[0], rtol=1e-12)

    def test_gamma1_identity(self, analysis, samples):
        """Test (n - 1) sqrt(J0) = <f, sqrt(J0)> sqrt(J0) + Gamma1(f) with the Eckart density."""
        f = 0.01 * samples[2]
        n = macro_state(analysis.recompose(f), analysis.grid).n
        a = float(analysis.inner(f, analysis.sqrt_J0))
        rhs = a * analysis.sqrt_J0 + analysis.gamma1_term(f)

        assert np.max(np.abs((n - 1.0) * analysis.sqrt_J0 - rhs)) < 1e-9 * analysis.sqrt_J0.max()

    @pytest.mark.parametrize("c", [-0.25, -0.1, -1.0e-4, 0.0, 1.0e-6, 0.05, 0.2])
    def test_density_expansion_identity(self, analysis, c):
        """Test sqrt(1 + Psi) = 1 + Psi/2 - Psi^2 / (2 (2 + Psi + 2 sqrt(1 + Psi))) through Gamma1."""
        f = c * analysis.sqrt_J0
        quantities = analysis.psi_phi(f)
        node = int(np.argmax(analysis.sqrt_J0))
        gamma1 = analysis.gamma1_term(f)[node] / analysis.sqrt_J0[node]
        a = float(analysis.inner(f, analysis.sqrt_J0))

        assert -0.5 < quantities.psi < 0.5
        assert 1.0 + a + gamma1 == pytest.approx(math.sqrt(1.0 + quantities.psi), abs=1e-14)

    def test_regime_error(self, analysis):
        """Test that 1 + Psi <= 0 raises RegimeError."""
        grid = analysis.grid
        f = 10.0 * grid.nodes[:, 0] * analysis.sqrt_J0

        with pytest.raises(RegimeError):
            analysis.psi_phi(f)


class TestConservedProjection:
    """Test cases for project_conserved."""

    def test_totals_vanish(self, analysis, samples):
        """Test that the projected field carries no conserved totals."""
        f = analysis.project_conserved(samples[:8])
        total = analysis.project(f.mean(axis=0))

        assert np.max(np.abs(total)) < 1e-13

    def test_non_kernel_part_unchanged(self, analysis, samples):
        """Test that only the kernel component of the average is removed."""
        f = analysis.project_conserved(samples[:8])
        difference = f - samples[:8]

        assert np.allclose(difference, difference[0], rtol=0.0, atol=1e-15)
        assert np.allclose(analysis.project(difference[0]), difference[0], atol=1e-12)


class TestEnergyFunctional:
    """Test cases for energy_functional."""

    def test_order_zero(self, analysis, samples):
        """Test the plain L2 norm over space and momentum."""
        g = samples[3]
        f = np.tile(g, (4, 1))
        expected = 2.0 * float(analysis.inner(g, g))

        assert analysis.energy_functional(f, (4,), L=2.0, max_order=0) == pytest.approx(expected, rel=1e-12)

    def test_spatial_derivative(self, analysis, samples):
        """Test the spectral x-derivative of a single Fourier mode."""
        g = samples[4]
        L = 2.0 * math.pi
        n_x = 8
        x = (np.arange(n_x) + 0.5) * (L / n_x)
        uniform = np.tile(g, (n_x, 1))
        wave = np.cos(x)[:, None] * g[None, :]

        e_wave = analysis.energy_functional(wave, (n_x,), L=L, max_order=1)
        e_uniform = analysis.energy_functional(uniform, (n_x,), L=L, max_order=1)
        expected = 0.5 * L * float(analysis.inner(g, g))

        assert e_wave - 0.5 * e_uniform == pytest.approx(expected, rel=1e-9)

    def test_higher_order_adds_terms(self, analysis, samples):
        """Test E_0 <= E_1 <= E_2."""
        f = np.tile(samples[5], (4, 1))
        values = [analysis.energy_functional(f, (4,), L=1.0, max_order=k) for k in range(3)]

        assert values[0] <= values[1] <= values[2]

    def test_invalid_order(self, analysis, samples):
        """Test that orders above two are rejected."""
        with pytest.raises(ValidationError) as exc_info:
            analysis.energy_functional(samples[:1], (1,), max_order=3)

        assert exc_info.value.details["value"] == 3


class TestFitDecay:
    """Test cases for fit_decay."""

    def test_exact_exponential(self):
        """Test rate, intercept and R^2 of an exact exponential."""
        t = np.linspace(0.0, 10.0, 21)
        fit = fit_decay(t, 3.0 * np.exp(-0.4 * t))

        assert fit.rate == pytest.approx(-0.4, rel=1e-10)
        assert fit.intercept == pytest.approx(math.log(3.0), rel=1e-10)
        assert fit.r2 == pytest.approx(1.0, abs=1e-12)
        assert fit.samples == 21

    def test_fit_fraction_window(self):
        """Test that only the final part of the series is fitted."""
        t = np.linspace(0.0, 10.0, 11)
        E = np.where(t < 5.0, 1.0, np.exp(-(t - 5.0)))
        fit = fit_decay(t, E, fit_fraction=0.5)

        assert fit.samples == 6
        assert fit.details["t_start"] == 5.0
        assert fit.details["t_end"] == 10.0
        assert fit.rate == pytest.approx(-1.0, rel=1e-10)

    def test_too_few_samples(self):
        """Test that fewer than three positive samples give None."""
        assert fit_decay(np.array([0.0, 1.0]), np.array([1.0, 0.5])) is None
        assert fit_decay(np.array([0.0, 1.0, 2.0]), np.array([1.0, 0.0, 0.0])) is None
        assert fit_decay(np.array([]), np.array([])) is None

    def test_to_dict_includes_window(self):
        """Test that the fit serializes with its window."""
        t = np.linspace(0.0, 4.0, 5)
        data = fit_decay(t, np.exp(-t)).to_dict()

        assert set(data) == {"rate", "intercept", "r2", "samples", "t_start", "t_end"}


class TestMacroscopicScaling:
    """Test cases for the size of the macroscopic fields of F = J0 + eps g sqrt(J0)."""

    @pytest.fixture(scope="class")
    def deviations(self, analysis):
        """|n - 1|, |U|, |e - e0| and U0 - 1 for eps = 1e-3 and 5e-4."""
        grid = analysis.grid
        g = 1.0 + grid.q_hat[:, 0] + 0.5 * np.tanh(grid.q0 - 2.0)
        base = macro_state(analysis.J0, grid)
        result = []
        for eps in (1.0e-3, 5.0e-4):
            state = macro_state(analysis.recompose(eps * g), grid)
            result.append(
                {
                    "n": abs(state.n - base.n),
                    "U": float(np.linalg.norm(state.U[1:])),
                    "e": abs(state.e - base.e),
                    "U0": state.U[0] - 1.0,
                }
            )
        return result

    @pytest.mark.parametrize("name", ["n", "U", "e"])
    def test_first_order_fields(self, deviations, name):
        """Test that halving eps halves the deviation."""
        assert deviations[0][name] / deviations[1][name] == pytest.approx(2.0, rel=0.1)

    def test_time_component_second_order(self, deviations):
        """Test that halving eps quarters U0 - 1."""
        assert deviations[0]["U0"] / deviations[1]["U0"] == pytest.approx(4.0, rel=0.2)


class TestColdEquilibrium:
    """Test cases for a cold equilibrium whose J0 underflows at the grid corners."""

    @pytest.fixture(scope="class")
    def cold(self):
        """Perturbation analysis at beta0 = 50 with the default truncation."""
        return PerturbationAnalysis(50.0, build_grid(default_q_max(50.0), 40))

    def test_sqrt_J0_positive(self, cold):
        """Test that sqrt(J0) stays positive where J0 itself underflows."""
        assert np.any(cold.J0 == 0.0)
        assert cold.sqrt_J0.min() > 0.0

    def test_equilibrium_decomposes_to_zero(self, cold):
        """Test f = 0 and E_f = 0 at the equilibrium."""
        f = cold.decompose(cold.J0)

        assert np.all(np.isfinite(f))
        assert np.max(np.abs(f)) == 0.0
        assert cold.energy_functional(np.tile(f, (2, 1)), (2,), max_order=1) == 0.0

    def test_perturbation_round_trip(self, cold):
        """Test that a small perturbation decomposes back without NaNs."""
        g = 1.0e-3 * np.tanh(cold.grid.q0 - 1.0)
        f = cold.decompose(cold.recompose(g))

        assert np.all(np.isfinite(f))
        assert np.allclose(f, g, rtol=0.0, atol=1e-12)
