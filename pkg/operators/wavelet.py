"""
Orthonormal 2-D Haar wavelet transform (PyWavelets, periodized)

Coefficients are laid out in a single L×L array, approximation band in
the top-left corner.
"""

from functools import lru_cache
from typing import Tuple

import numpy as np
import pywt

from operators.hadamard import is_power_of_two
from operators.spectral import OrthogonalMap
from utils.exceptions import InvalidDimensionError

WAVELET = "haar"
MODE = "periodization"


def _check(side: int, levels: int) -> None:
    if not is_power_of_two(side):
        raise InvalidDimensionError(f"image side must be a power of two, got {side}")
    max_levels = int(np.log2(side))
    if not 0 <= levels <= max_levels:
        raise InvalidDimensionError(f"levels must be in [0, {max_levels}] for side {side}, got {levels}")


@lru_cache(maxsize=32)
def _slices(side: int, levels: int):
    coeffs = pywt.wavedec2(np.zeros((side, side)), WAVELET, mode=MODE, level=levels)
    _, slices = pywt.coeffs_to_array(coeffs)
    return slices


def haar_wavelet_2d(image: np.ndarray, levels: int, direction: str = "forward") -> np.ndarray:
    """
    Orthonormal Haar analysis ("forward") or synthesis ("inverse")

    Args:
        image: L×L samples, or L×L coefficients for the inverse
        levels: Decomposition depth, at most log2(L)
        direction: "forward" or "inverse"
    """
    arr = np.asarray(image, dtype=float)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise InvalidDimensionError(f"expected a square array, got shape {arr.shape}")
    side = arr.shape[0]
    _check(side, levels)
    if levels == 0:
        return arr.copy()

    if direction == "forward":
        coeffs = pywt.wavedec2(arr, WAVELET, mode=MODE, level=levels)
        out, _ = pywt.coeffs_to_array(coeffs)
        return out
    if direction == "inverse":
        coeffs = pywt.array_to_coeffs(arr, _slices(side, levels), output_format="wavedec2")
        return pywt.waverec2(coeffs, WAVELET, mode=MODE)
    raise ValueError(f"direction must be 'forward' or 'inverse', got {direction!r}")


def approximation_shape(side: int, levels: int) -> Tuple[int, int]:
    _check(side, levels)
    k = side >> levels
    return k, k


def detail_mask(side: int, levels: int) -> np.ndarray:
    """Boolean L×L mask, True on detail coefficients"""
    rows, cols = approximation_shape(side, levels)
    mask = np.ones((side, side), dtype=bool)
    mask[:rows, :cols] = False
    return mask


def wavelet_map(side: int, levels: int) -> OrthogonalMap:
    """Ψ as an orthogonal map on flattened L·L vectors (apply = analysis)"""
    _check(side, levels)

    def analysis(x: np.ndarray) -> np.ndarray:
        return haar_wavelet_2d(x.reshape(side, side), levels, "forward").ravel()

    def synthesis(c: np.ndarray) -> np.ndarray:
        return haar_wavelet_2d(c.reshape(side, side), levels, "inverse").ravel()

    return OrthogonalMap(dim=side * side, forward_fn=analysis, adjoint_fn=synthesis)
