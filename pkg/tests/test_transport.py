"""
Tests for Transport Strategies

This module contains unit tests for the spectral and upwind free-streaming
schemes.
"""

import math

import numpy as np
import pytest

from app.strategies.transport_strategies import SpectralTransport, UpwindTransport


def _centres(n_x, L):
    return (np.arange(n_x) + 0.5) * (L / n_x)


@pytest.fixture
def velocities():
    """Three node columns moving along x, against x and along y."""
    return np.array([[0.3, 0.0, 0.0], [-0.7, 0.0, 0.0], [0.0, 0.5, 0.0]])


class TestSpectralTransport:
    """Test cases for SpectralTransport."""

    @pytest.fixture
    def strategy(self):
        """Create spectral transport."""
        return SpectralTransport()

    def test_single_mode_exact_shift(self, strategy, velocities):
        """Test that a Fourier mode is translated exactly."""
        L = 2.0
        x = _centres(16, L)
        F = np.tile((2.0 + np.cos(2.0 * math.pi * x / L))[:, None], (1, 3))
        result = strategy.advect(F, velocities, (16,), L, dt=1.3)

        for column, v in enumerate(velocities[:, 0]):
            expected = 2.0 + np.cos(2.0 * math.pi * (x - v * 1.3) / L)
            assert np.allclose(result[:, column], expected, rtol=0.0, atol=1e-12)

    def test_full_period_is_identity(self, strategy):
        """Test that streaming across one period returns the data."""
        L = 1.0
        F = np.random.default_rng(5).uniform(1.0, 2.0, size=(8, 1))
        result = strategy.advect(F, np.array([[0.5, 0.0, 0.0]]), (8,), L, dt=2.0)

        assert np.allclose(result, F, rtol=0.0, atol=1e-12)

    def test_reversible(self, strategy, velocities):
        """Test that a negative step undoes a positive one on an odd lattice (no Nyquist mode)."""
        F = np.random.default_rng(6).uniform(1.0, 2.0, size=(15, 3))
        forward = strategy.advect(F, velocities, (15,), 3.0, dt=0.37)
        back = strategy.advect(forward, velocities, (15,), 3.0, dt=-0.37)

        assert np.allclose(back, F, rtol=0.0, atol=1e-12)

    def test_conserves_column_sums(self, strategy, velocities):
        """Test that the spatial sum of every column is unchanged."""
        F = np.random.default_rng(7).uniform(1.0, 2.0, size=(16, 3))
        result = strategy.advect(F, velocities, (16,), 1.0, dt=0.21)

        assert np.allclose(result.sum(axis=0), F.sum(axis=0), rtol=1e-13)

    def test_three_dimensional_lattice(self, strategy, velocities):
        """Test a mode along the second axis on a 3D lattice."""
        n_x, L = 4, 1.0
        y = _centres(n_x, L)
        profile = 2.0 + np.sin(2.0 * math.pi * y / L)
        field = np.broadcast_to(profile[None, :, None], (n_x, n_x, n_x))
        F = np.tile(field.reshape(-1, 1), (1, 3))
        result = strategy.advect(F, velocities, (n_x, n_x, n_x), L, dt=0.1)

        expected = 2.0 + np.sin(2.0 * math.pi * (y - 0.05) / L)
        moved = result[:, 2].reshape(n_x, n_x, n_x)
        assert np.allclose(moved[1, :, 2], expected, rtol=0.0, atol=1e-12)
        # Columns moving along x see no variation
        assert np.allclose(result[:, 0], F[:, 0], rtol=0.0, atol=1e-12)

    def test_negative_values_clamped(self, strategy, caplog):
        """Test that Gibbs undershoots of a step are clamped to zero with a warning."""
        F = np.zeros((16, 1))
        F[4:8, 0] = 1.0
        with caplog.at_level("WARNING"):
            result = strategy.advect(F, np.array([[1.0, 0.0, 0.0]]), (16,), 16.0, dt=0.5)

        assert result.min() == 0.0
        assert "clamped" in caplog.text


class TestUpwindTransport:
    """Test cases for UpwindTransport."""

    @pytest.fixture
    def strategy(self):
        """Create upwind transport."""
        return UpwindTransport()

    def test_conserves_column_sums(self, strategy, velocities):
        """Test that the flux form conserves every column."""
        F = np.random.default_rng(8).uniform(1.0, 2.0, size=(32, 3))
        result = strategy.advect(F, velocities, (32,), 1.0, dt=0.05)

        assert np.allclose(result.sum(axis=0), F.sum(axis=0), rtol=1e-13)

    def test_no_new_extrema(self, strategy, velocities):
        """Test that a step profile stays within its bounds, also with sub-cycling."""
        F = np.ones((32, 3))
        F[8:16] = 2.0
        for dt in (0.01, 0.4):
            result = strategy.advect(F, velocities, (32,), 1.0, dt=dt)
            assert result.min() >= 1.0 - 1e-12
            assert result.max() <= 2.0 + 1e-12

    def test_smooth_profile_accuracy(self, strategy):
        """Test second-order accuracy on a resolved sine wave."""
        L, n_x = 1.0, 128
        x = _centres(n_x, L)
        F = (2.0 + np.sin(2.0 * math.pi * x / L))[:, None]
        result = strategy.advect(F, np.array([[0.5, 0.0, 0.0]]), (n_x,), L, dt=0.2)
        expected = 2.0 + np.sin(2.0 * math.pi * (x - 0.1) / L)

        assert np.max(np.abs(result[:, 0] - expected)) < 1e-2

    def test_uniform_state_unchanged(self, strategy, velocities):
        """Test that a uniform field is a fixed point."""
        F = np.full((2 * 2 * 2, 3), 1.5)

        assert np.allclose(strategy.advect(F, velocities, (2, 2, 2), 1.0, dt=0.3), F, rtol=1e-15)

    def test_names(self, strategy):
        """Test strategy names."""
        assert strategy.name == "upwind"
        assert SpectralTransport().name == "spectral"
