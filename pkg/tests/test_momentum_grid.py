"""
Tests for the Momentum Grid

This module contains unit tests for grid construction, paired reductions
and the moment engine.
"""

import numpy as np
import pytest

from app.core.exceptions import ValidationError
from app.services import special_functions
from app.services.maxwellian import global_maxwellian
from app.services.momentum_grid import (
    build_grid,
    check_resolution,
    default_q_max,
    inner,
    moment,
    moment_components,
    normalization_error,
    paired_sum,
)


@pytest.fixture(scope="module")
def grid():
    """Coarse grid for structural tests."""
    return build_grid(10.0, 16)


@pytest.fixture(scope="module")
def resolved_grid():
    """Grid resolving the normalization at beta0 = 1 below 1e-6."""
    return build_grid(28.0, 140)


class TestBuildGrid:
    """Test cases for build_grid."""

    def test_shapes_and_weights(self, grid):
        """Test node count, spacing and uniform weights."""
        assert grid.size == 16**3
        assert grid.nodes.shape == (16**3, 3)
        assert grid.spacing == pytest.approx(20.0 / 16)
        assert np.all(grid.weights == grid.cell_weight)

    def test_nodes_are_cell_centres(self, grid):
        """Test that the axis holds midpoints and excludes the origin."""
        assert grid.axis[0] == pytest.approx(-10.0 + 0.5 * grid.spacing)
        assert grid.axis[-1] == pytest.approx(10.0 - 0.5 * grid.spacing)
        assert not np.any(grid.axis == 0.0)

    def test_mirror_ordering(self, grid):
        """Test that node k and node N-1-k are exact negatives."""
        assert np.array_equal(grid.nodes[::-1], -grid.nodes)
        assert np.array_equal(grid.q0[::-1], grid.q0)

    def test_energies(self, grid):
        """Test q0 = sqrt(1 + |q|^2) >= 1."""
        assert np.allclose(grid.q0, np.sqrt(1.0 + np.sum(grid.nodes**2, axis=1)))
        assert grid.q0.min() > 1.0

    def test_arrays_are_read_only(self, grid):
        """Test that grid arrays cannot be modified in place."""
        with pytest.raises(ValueError):
            grid.weights[0] = 0.0

    def test_odd_axis_count_raises_error(self):
        """Test that an odd node count is rejected."""
        with pytest.raises(ValidationError, match="even"):
            build_grid(10.0, 15)

    def test_invalid_truncation_raises_error(self):
        """Test that a non-positive q_max is rejected."""
        with pytest.raises(ValidationError):
            build_grid(0.0, 16)

    def test_default_truncation(self):
        """Test q_max = max(10, 30 / beta0)."""
        assert default_q_max(1.0) == 30.0
        assert default_q_max(10.0) == 10.0


class TestPairedReductions:
    """Test cases for paired sums and moments."""

    def test_odd_integrands_vanish_exactly(self, grid):
        """Test that odd moments of an even field are exactly zero."""
        J0 = global_maxwellian(1.0, grid)

        for i in range(3):
            assert moment(J0, grid, phi=grid.nodes[:, i], over_q0=True) == 0.0
            assert moment(J0, grid, phi=grid.nodes[:, i] * grid.q0) == 0.0

    def test_paired_sum_matches_plain_sum(self, grid):
        """Test that pairing only reorders the summation."""
        values = np.random.default_rng(1).uniform(size=grid.size)

        assert paired_sum(values) == pytest.approx(values.sum(), rel=1e-13)

    def test_batched_moment(self, grid):
        """Test one moment per leading index."""
        J0 = global_maxwellian(1.0, grid)
        batch = np.vstack([J0, 2.0 * J0])
        values = moment(batch, grid)

        assert values.shape == (2,)
        assert values[1] == 2.0 * values[0]

    def test_callable_phi(self, grid):
        """Test a test function given as a callable of the nodes."""
        J0 = global_maxwellian(1.0, grid)
        expected = moment(J0, grid, phi=grid.nodes[:, 0] ** 2)

        assert moment(J0, grid, phi=lambda q: q[:, 0] ** 2) == expected

    def test_inner_product_symmetric(self, grid):
        """Test <f, g> = <g, f>."""
        rng = np.random.default_rng(2)
        f, g = rng.normal(size=(2, grid.size))

        assert inner(f, g, grid) == pytest.approx(inner(g, f, grid), rel=1e-14)


class TestMomentComponents:
    """Test cases for moment_components."""

    def test_against_direct_sums(self, grid):
        """Test N and T against direct quadrature sums."""
        F = np.random.default_rng(3).uniform(size=grid.size)
        N, T = moment_components(F, grid)
        four = np.column_stack([grid.q0, grid.nodes])
        integrand = grid.weights * F / grid.q0

        assert np.allclose(N, four.T @ integrand, rtol=1e-12, atol=1e-12)
        assert np.allclose(T, (four.T * integrand) @ four, rtol=1e-12, atol=1e-12)

    def test_symmetric_tensor(self, grid):
        """Test T^{mu nu} = T^{nu mu} exactly."""
        F = np.random.default_rng(4).uniform(size=(3, grid.size))
        _, T = moment_components(F, grid)

        assert T.shape == (3, 4, 4)
        assert np.array_equal(T, np.swapaxes(T, 1, 2))

    def test_even_field_has_no_flux(self, grid):
        """Test that N^i and T^{0i} vanish exactly for an even field."""
        N, T = moment_components(global_maxwellian(1.0, grid), grid)

        assert np.all(N[1:] == 0.0)
        assert np.all(T[0, 1:] == 0.0)


class TestResolution:
    """Test cases for the normalization check."""

    def test_resolved_grid_meets_tolerance(self, resolved_grid):
        """Test the normalization and second moments on the resolved grid."""
        beta0 = 1.0
        J0 = global_maxwellian(beta0, resolved_grid)
        q1 = resolved_grid.nodes[:, 0]

        assert normalization_error(resolved_grid, beta0) < 1e-6
        assert moment(J0, resolved_grid, over_q0=True) == pytest.approx(special_functions.k_ratio(beta0), rel=1e-6)
        assert moment(J0, resolved_grid, phi=q1 * q1, over_q0=True) == pytest.approx(1.0 / beta0, rel=1e-6)
        assert moment(J0, resolved_grid, phi=resolved_grid.q0) == pytest.approx(
            special_functions.e_tilde(beta0), rel=1e-6
        )

    def test_coarse_grid_warns(self, grid, caplog):
        """Test that an under-resolved grid logs a warning and still returns."""
        with caplog.at_level("WARNING"):
            error = check_resolution(grid, 1.0, tol=1e-12)

        assert error > 1e-12
        assert "resolves the normalization" in caplog.text
