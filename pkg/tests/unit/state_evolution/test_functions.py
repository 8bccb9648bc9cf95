"""
Unit tests for the E/A error and sensitivity functions
"""

import numpy as np
import pytest

from denoisers.separable import BernoulliGaussianMmse, SoftThreshold
from operators.spectral import Spectrum
from state_evolution.denoiser_functions import (
    denoiser_error_E1,
    denoiser_sensitivity_A1,
    error_and_sensitivity,
    stein_sensitivity_A1,
)
from state_evolution.lmmse_functions import lmmse_error_E2, lmmse_sensitivity_A2
from utils.exceptions import InvalidDimensionError


@pytest.fixture
def flat():
    return Spectrum(values=np.ones(10), m=10)


class TestLmmseFunctions:
    """Test suite for the closed-form E₂ and A₂"""

    def test_flat_spectrum(self, flat):
        """Test s = 1, γ_w = γ₂ = τ₂ = 1"""
        assert lmmse_sensitivity_A2(1.0, flat, gamma_w=1.0) == pytest.approx(0.5)
        assert lmmse_error_E2(1.0, 1.0, flat, gamma_w=1.0, gamma_w0=float("inf")) == pytest.approx(0.25)
        assert lmmse_error_E2(1.0, 1.0, flat, gamma_w=1.0, gamma_w0=1.0) == pytest.approx(0.5)

    def test_zero_singular_values(self):
        """Test padded zeros contribute a sensitivity of one"""
        spectrum = Spectrum(values=np.array([1.0, 1.0, 0.0, 0.0]), m=2)
        assert lmmse_sensitivity_A2(1.0, spectrum, gamma_w=1.0) == pytest.approx(0.75)

    def test_sensitivity_range(self, flat):
        """Test A₂ stays in (0, 1] across precisions"""
        for gamma in (1e-8, 1.0, 1e8):
            assert 0 < lmmse_sensitivity_A2(gamma, flat, gamma_w=10.0) <= 1

    def test_rejects_non_positive(self, flat):
        """Test γ₂ or τ₂ ≤ 0"""
        with pytest.raises(InvalidDimensionError):
            lmmse_sensitivity_A2(0.0, flat, 1.0)
        with pytest.raises(InvalidDimensionError):
            lmmse_error_E2(1.0, -1.0, flat, 1.0, 1.0)


class TestDenoiserFunctions:
    """Test suite for the Monte Carlo E₁ and A₁"""

    def test_identity_denoiser(self, rng):
        """Test θ = 0 soft threshold: E₁ ≈ τ₁ and A₁ = 1"""
        x0 = rng.standard_normal(1000)
        identity = SoftThreshold(threshold=0.0)
        e1, a1 = error_and_sensitivity(identity, x0, gamma1=1.0, tau1=0.5, trials=100, seed=3)
        assert e1.value == pytest.approx(0.5, rel=0.02)
        assert a1.value == pytest.approx(1.0)
        assert e1.trials == 100

    def test_seeded(self, rng):
        """Test identical seeds give identical estimates"""
        x0 = rng.standard_normal(200)
        d = BernoulliGaussianMmse(rho=0.2)
        assert denoiser_error_E1(d, x0, 2.0, 0.5, trials=20, seed=9) == denoiser_error_E1(
            d, x0, 2.0, 0.5, trials=20, seed=9
        )

    def test_standard_error_shrinks(self, rng):
        """Test the reported standard error falls with more trials"""
        x0 = rng.standard_normal(100)
        d = BernoulliGaussianMmse(rho=0.2)
        few = denoiser_sensitivity_A1(d, x0, 2.0, 0.5, trials=10, seed=1)
        many = denoiser_sensitivity_A1(d, x0, 2.0, 0.5, trials=400, seed=1)
        assert many.std_error < few.std_error

    def test_stein_matches_divergence(self, rng):
        """Test the Stein cross-estimator agrees with the analytic A₁"""
        x0 = np.where(rng.random(5000) < 0.2, rng.standard_normal(5000), 0.0)
        d = SoftThreshold(threshold=0.5)
        direct = denoiser_sensitivity_A1(d, x0, 1.0, 0.5, trials=20, seed=2)
        stein = stein_sensitivity_A1(d, x0, 1.0, 0.5, trials=200, seed=2)
        assert stein.value == pytest.approx(direct.value, abs=0.03)

    def test_rejects_bad_variance(self, rng):
        """Test τ₁ ≤ 0"""
        with pytest.raises(InvalidDimensionError):
            error_and_sensitivity(SoftThreshold(threshold=0.1), rng.standard_normal(10), 1.0, 0.0)
