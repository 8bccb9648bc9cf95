"""
Unit tests for SVD-form operators
"""

import numpy as np
import pytest

from operators.spectral import (
    OrthogonalMap,
    Spectrum,
    SpectralOperator,
    build_operator,
    dense_matrix,
    geometric_spectrum,
    haar_orthogonal,
    identity_operator,
    iid_gaussian_operator,
    operator_from_matrix,
    orthogonality_defect,
)
from utils.exceptions import InvalidDimensionError, InvalidSpectrumError


class TestSpectrum:
    """Test suite for Spectrum and geometric_spectrum"""

    def test_geometric_cond_and_norm(self):
        """Test the ratio s1/sM and the Σs² = N normalization"""
        spec = geometric_spectrum(64, 128, 100.0)

        assert spec.cond == pytest.approx(100.0, rel=1e-12)
        assert spec.normalization == pytest.approx(128.0, rel=1e-9)
        assert np.all(spec.values[64:] == 0)

    def test_flat_spectrum(self):
        """Test cond 1 gives equal singular values"""
        spec = geometric_spectrum(32, 64, 1.0)
        assert np.allclose(spec.values[:32], np.sqrt(2.0))

    @pytest.mark.parametrize("cond", [1.0, 10.0, 1e6])
    def test_single_row_keeps_normalization(self, cond):
        """Test M = 1 scales its one value to √N whatever cond asks for"""
        spec = geometric_spectrum(1, 8, cond)

        assert spec.values[0] == pytest.approx(np.sqrt(8.0), rel=1e-12)
        assert spec.normalization == pytest.approx(8.0, rel=1e-12)
        assert np.all(spec.values[1:] == 0)

    def test_rejects_unsorted(self):
        """Test increasing values are rejected"""
        with pytest.raises(InvalidSpectrumError):
            Spectrum(values=np.array([1.0, 2.0]), m=2)

    def test_rejects_tail(self):
        """Test nonzero entries beyond M are rejected"""
        with pytest.raises(InvalidSpectrumError):
            Spectrum(values=np.array([2.0, 1.0, 0.5]), m=2)

    def test_rejects_bad_cond(self):
        """Test cond below one is rejected"""
        with pytest.raises(InvalidSpectrumError):
            geometric_spectrum(4, 8, 0.5)

    def test_rejects_m_above_n(self):
        """Test M > N is rejected"""
        with pytest.raises(InvalidDimensionError):
            geometric_spectrum(9, 8, 2.0)

    def test_from_values_sorts(self):
        """Test arbitrary order is sorted non-increasing"""
        spec = Spectrum.from_values(np.array([0.5, 2.0, 1.0]), m=3)
        assert spec.values.tolist() == [2.0, 1.0, 0.5]


class TestOrthogonalMaps:
    """Test suite for OrthogonalMap and haar_orthogonal"""

    def test_haar_is_orthogonal(self):
        """Test QᵀQ = I"""
        q = haar_orthogonal(32, seed=5).to_matrix()
        assert np.allclose(q.T @ q, np.eye(32), atol=1e-12)

    def test_haar_seeded(self):
        """Test the same seed gives the same matrix"""
        assert np.array_equal(haar_orthogonal(8, 1).to_matrix(), haar_orthogonal(8, 1).to_matrix())

    def test_defect_small(self):
        """Test the orthogonality defect is at machine precision"""
        assert orthogonality_defect(haar_orthogonal(16, 2)) < 1e-12

    def test_compose(self):
        """Test composition order and adjoint"""
        a = haar_orthogonal(6, 1)
        b = haar_orthogonal(6, 2)
        c = a.compose(b)
        x = np.arange(6.0)

        assert np.allclose(c.apply(x), a.apply(b.apply(x)))
        assert np.allclose(c.adjoint(c.apply(x)), x)

    def test_rejects_wrong_length(self):
        """Test vectors of the wrong length raise"""
        with pytest.raises(InvalidDimensionError):
            OrthogonalMap.identity(4).apply(np.zeros(5))


class TestSpectralOperator:
    """Test suite for SpectralOperator"""

    def test_forward_matches_dense(self, small_operator, rng):
        """Test A·x and Aᵀ·y agree with the materialized matrix"""
        a = dense_matrix(small_operator)
        x = rng.standard_normal(small_operator.n)
        y = rng.standard_normal(small_operator.m)

        assert np.allclose(small_operator.forward(x), a @ x)
        assert np.allclose(small_operator.adjoint(y), a.T @ y)

    def test_singular_values_of_dense(self, small_operator):
        """Test the materialized matrix has the stored spectrum"""
        sv = np.linalg.svd(dense_matrix(small_operator), compute_uv=False)
        assert np.allclose(sv, small_operator.s[: small_operator.m])

    def test_from_matrix_roundtrip(self, rng):
        """Test operator_from_matrix reproduces the matrix"""
        a = rng.standard_normal((5, 9))
        op = operator_from_matrix(a)
        x = rng.standard_normal(9)
        assert np.allclose(op.forward(x), a @ x)
        assert op.s.shape == (9,)
        assert np.all(op.s[5:] == 0)

    def test_iid_normalization(self):
        """Test ‖A‖_F² = N for the i.i.d. operator"""
        op = iid_gaussian_operator(20, 50, seed=3)
        assert np.sum(op.s**2) == pytest.approx(50.0)

    def test_identity(self, rng):
        """Test the identity operator"""
        x = rng.standard_normal(7)
        assert np.array_equal(identity_operator(7).forward(x), x)

    def test_rejects_bad_factor_size(self):
        """Test mismatched factor sizes raise"""
        with pytest.raises(InvalidDimensionError):
            SpectralOperator(
                m=3, n=4, s=np.ones(4), u=OrthogonalMap.identity(3), v=OrthogonalMap.identity(4)
            )

    def test_with_domain_map(self, rng):
        """Test A·Ψᵀ acting on coefficients"""
        op = build_operator(geometric_spectrum(8, 16, 3.0), 1, 2)
        psi = haar_orthogonal(16, 9)
        composed = op.with_domain_map(psi)
        c = rng.standard_normal(16)

        assert np.allclose(composed.forward(c), op.forward(psi.adjoint(c)))
