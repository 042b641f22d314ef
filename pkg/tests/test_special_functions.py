"""
Tests for Special Functions

This module contains unit tests for the Bessel functions, the Juttner
normalizer and the temperature closure functions.
"""

import math

import numpy as np
import pytest
from scipy.special import kn, kvp

from app.core.exceptions import ClosureDomainError, DomainError
from app.services import special_functions as sf


BETAS = np.geomspace(0.05, 50.0, 25)


class TestBesselFunctions:
    """Test cases for K0, K1 and K2."""

    @pytest.mark.parametrize("order", [0, 1, 2])
    def test_against_scipy(self, order):
        """Test agreement with scipy.special.kn across the beta range."""
        for beta in BETAS:
            assert sf.bessel_k(order, beta) == pytest.approx(kn(order, beta), rel=1e-9)

    def test_known_values(self):
        """Test tabulated values at beta = 1."""
        k = sf.bessel_triplet(1.0)

        assert k.k0 == pytest.approx(0.42102443824070834, rel=1e-10)
        assert k.k1 == pytest.approx(0.6019072301972346, rel=1e-10)
        assert k.k2 == pytest.approx(1.6248388986351774, rel=1e-10)

    def test_recurrence(self):
        """Test K2 = 2 K1 / beta + K0."""
        for beta in BETAS:
            k = sf.bessel_triplet(beta)
            assert abs(k.k2 - 2.0 * k.k1 / beta - k.k0) / k.k2 < 1e-10

    @pytest.mark.parametrize("order", [1, 2])
    def test_derivative_matches_scipy(self, order):
        """Test the recurrence derivatives against scipy.special.kvp."""
        for beta in (0.1, 1.0, 7.5):
            assert sf.bessel_k_prime(order, beta) == pytest.approx(kvp(order, beta), rel=1e-9)

    def test_ratio_in_unit_interval(self):
        """Test 0 < K1/K2 < 1, including large beta where K1 and K2 underflow."""
        for beta in (0.05, 1.0, 50.0, 900.0):
            assert 0.0 < sf.k_ratio(beta) < 1.0

    def test_invalid_order_raises_error(self):
        """Test that orders other than 0, 1, 2 raise DomainError."""
        with pytest.raises(DomainError):
            sf.bessel_k(3, 1.0)
        with pytest.raises(DomainError):
            sf.bessel_k_prime(0, 1.0)

    @pytest.mark.parametrize("beta", [0.0, -1.0, float("nan"), float("inf")])
    def test_non_positive_beta_raises_error(self, beta):
        """Test that beta outside (0, inf) raises DomainError."""
        with pytest.raises(DomainError):
            sf.bessel_k(2, beta)


class TestNormalizer:
    """Test cases for M(beta)."""

    def test_closed_form(self):
        """Test M(beta) = 4 pi K2(beta) / beta."""
        for beta in (0.2, 1.0, 10.0):
            assert sf.m_of_beta(beta) == pytest.approx(4.0 * math.pi * kn(2, beta) / beta, rel=1e-9)

    def test_log_derivative(self):
        """Test -M'/M = e_tilde by central differences."""
        for beta in (0.1, 1.0, 20.0):
            h = 1e-5 * beta
            derivative = (sf.m_of_beta(beta + h) - sf.m_of_beta(beta - h)) / (2.0 * h)
            assert -derivative / sf.m_of_beta(beta) == pytest.approx(sf.e_tilde(beta), rel=1e-6)
            assert sf.m_of_beta_prime(beta) == pytest.approx(derivative, rel=1e-6)

    def test_scaled_normalizer_survives_underflow(self):
        """Test that exp(beta) M(beta) stays finite where M underflows."""
        assert sf.m_of_beta(800.0) == 0.0
        scaled = sf.m_of_beta_scaled(800.0)

        assert math.isfinite(scaled) and scaled > 0.0
        # exp(b) M(b) ~ (2 pi / b)^(3/2) for large b
        assert scaled == pytest.approx((2.0 * math.pi / 800.0) ** 1.5, rel=5e-3)


class TestClosureFunctions:
    """Test cases for e_tilde, h_tilde and their derivatives."""

    def test_e_tilde_decreasing_above_one(self):
        """Test that e_tilde is strictly decreasing and greater than 1."""
        values = np.array([sf.e_tilde(beta) for beta in BETAS])

        assert np.all(values > 1.0)
        assert np.all(np.diff(values) < 0.0)

    def test_limits(self):
        """Test the ultra-relativistic and non-relativistic limits."""
        assert sf.e_tilde(1e-3) == pytest.approx(3.0e3, rel=1e-3)
        assert sf.e_tilde(500.0) - 1.0 == pytest.approx(1.5 / 500.0, rel=1e-2)

    def test_enthalpy(self):
        """Test h_tilde = e_tilde + 1/beta."""
        for beta in (0.3, 3.0, 30.0):
            assert sf.h_tilde(beta) == pytest.approx(sf.e_tilde(beta) + 1.0 / beta, rel=1e-14)

    def test_e_tilde_prime(self):
        """Test e_tilde' against central differences and its sign."""
        for beta in (0.1, 1.0, 10.0):
            h = 1e-5 * beta
            derivative = (sf.e_tilde(beta + h) - sf.e_tilde(beta - h)) / (2.0 * h)
            assert sf.e_tilde_prime(beta) < 0.0
            assert sf.e_tilde_prime(beta) == pytest.approx(derivative, rel=1e-6)

    def test_ratio_derivative(self):
        """Test (K1/K2)' = 3/beta K1/K2 + (K1/K2)^2 - 1."""
        for beta in (0.5, 2.0, 15.0):
            h = 1e-5 * beta
            derivative = (sf.k_ratio(beta + h) - sf.k_ratio(beta - h)) / (2.0 * h)
            assert sf.k_ratio_prime(beta) == pytest.approx(derivative, rel=1e-6, abs=1e-9)

    def test_closure_bundle(self):
        """Test that closure_functions bundles the individual functions."""
        bundle = sf.closure_functions(2.0)

        assert bundle.beta == 2.0
        assert bundle.e_tilde == sf.e_tilde(2.0)
        assert bundle.h_tilde == sf.h_tilde(2.0)
        assert bundle.e_tilde_prime == sf.e_tilde_prime(2.0)


class TestInvertETilde:
    """Test cases for the temperature inversion."""

    def test_round_trip(self):
        """Test invert_e_tilde(e_tilde(beta)) = beta over the beta range."""
        for beta in BETAS:
            assert sf.invert_e_tilde(sf.e_tilde(beta)) == pytest.approx(beta, rel=1e-10)

    def test_warm_start(self):
        """Test that a nearby guess gives the same root."""
        e = sf.e_tilde(3.7)

        assert sf.invert_e_tilde(e, beta_guess=3.6) == pytest.approx(3.7, rel=1e-10)
        assert sf.invert_e_tilde(e, beta_guess=1e4) == pytest.approx(3.7, rel=1e-10)

    def test_extreme_energies(self):
        """Test inversion far outside the initial bracket."""
        for beta in (1e-5, 5e3):
            assert sf.invert_e_tilde(sf.e_tilde(beta)) == pytest.approx(beta, rel=1e-8)

    @pytest.mark.parametrize("e", [1.0, 0.5, -2.0, float("nan")])
    def test_energy_not_above_one_raises_error(self, e):
        """Test that e <= 1 raises ClosureDomainError."""
        with pytest.raises(ClosureDomainError) as exc_info:
            sf.invert_e_tilde(e)

        assert exc_info.value.exit_code == 2
