"""Measurement operators in SVD form, fast Hadamard operators, wavelets and PGM I/O"""

from operators.hadamard import fast_jphd_operator, fwht
from operators.spectral import (
    OperatorKind,
    OrthogonalMap,
    SpectralOperator,
    Spectrum,
    build_operator,
    dense_matrix,
    geometric_spectrum,
    haar_orthogonal,
    identity_operator,
    iid_gaussian_operator,
    operator_from_matrix,
)
from operators.wavelet import haar_wavelet_2d, wavelet_map

__all__ = [
    "OperatorKind",
    "OrthogonalMap",
    "SpectralOperator",
    "Spectrum",
    "build_operator",
    "dense_matrix",
    "fast_jphd_operator",
    "fwht",
    "geometric_spectrum",
    "haar_orthogonal",
    "haar_wavelet_2d",
    "identity_operator",
    "iid_gaussian_operator",
    "operator_from_matrix",
    "wavelet_map",
]
