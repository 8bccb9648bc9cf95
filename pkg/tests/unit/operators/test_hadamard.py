"""
Unit tests for the fast Walsh-Hadamard operator
"""

import numpy as np
import pytest
import scipy.linalg

from operators.hadamard import fast_jphd_operator, fwht, is_power_of_two
from operators.spectral import dense_matrix, geometric_spectrum
from utils.exceptions import InvalidDimensionError, InvalidSpectrumError


class TestFwht:
    """Test suite for fwht"""

    def test_matches_scipy(self, rng):
        """Test against the normalized Sylvester Hadamard matrix"""
        x = rng.standard_normal(32)
        expected = scipy.linalg.hadamard(32) @ x / np.sqrt(32)
        assert np.allclose(fwht(x), expected)

    def test_involution(self, rng):
        """Test H·H = I"""
        x = rng.standard_normal(64)
        assert np.allclose(fwht(fwht(x)), x)

    def test_rejects_non_power(self):
        """Test lengths that are not powers of two"""
        assert not is_power_of_two(12)
        with pytest.raises(InvalidDimensionError):
            fwht(np.zeros(12))


class TestFastJphd:
    """Test suite for fast_jphd_operator"""

    def test_orthonormal_rows(self):
        """Test A·Aᵀ = I without a spectrum"""
        a = dense_matrix(fast_jphd_operator(64, 16, seed=1))
        assert np.allclose(a @ a.T, np.eye(16), atol=1e-12)

    def test_adjoint(self, rng):
        """Test ⟨Ax, y⟩ = ⟨x, Aᵀy⟩"""
        op = fast_jphd_operator(128, 40, seed=2)
        x = rng.standard_normal(128)
        y = rng.standard_normal(40)
        assert np.dot(op.forward(x), y) == pytest.approx(np.dot(x, op.adjoint(y)))

    def test_with_spectrum(self):
        """Test the ill-conditioned variant carries the requested singular values"""
        spec = geometric_spectrum(16, 64, 50.0)
        op = fast_jphd_operator(64, 16, seed=3, spectrum=spec)
        sv = np.linalg.svd(dense_matrix(op), compute_uv=False)
        assert np.allclose(sv, spec.values[:16])

    def test_spectrum_shape_mismatch(self):
        """Test a spectrum of the wrong size raises"""
        with pytest.raises(InvalidSpectrumError):
            fast_jphd_operator(64, 16, seed=3, spectrum=geometric_spectrum(8, 64, 2.0))

    def test_seeded(self, rng):
        """Test the same seed gives the same operator"""
        x = rng.standard_normal(32)
        assert np.array_equal(fast_jphd_operator(32, 8, 5).forward(x), fast_jphd_operator(32, 8, 5).forward(x))
