"""
Linear FIR denoiser: causal convolution truncated to the first N samples
"""

from typing import Any, Dict, Optional, Sequence

import numpy as np
import scipy.signal

from denoisers.base import DenoiserKind, DenoiserSpec, DivergenceMode
from utils.constants import FREQUENCY_GRID
from utils.exceptions import InvalidDenoiserError, InvalidDimensionError


def fir_denoise(r: np.ndarray, taps: np.ndarray) -> np.ndarray:
    """x̂_n = Σ_k h_k·r_{n−k}, n = 0..N−1"""
    return scipy.signal.lfilter(taps, [1.0], r)


class FirConvolution(DenoiserSpec):
    """
    g(r) = T_N(h ∗ r); its Jacobian is lower-triangular Toeplitz, so the
    divergence is the lag-zero tap h₀ for every input
    """

    kind = DenoiserKind.FIR_CONVOLUTION
    has_analytic_divergence = True

    def __init__(self, taps: Sequence[float], divergence_mode: Optional[DivergenceMode] = None):
        taps = np.asarray(taps, dtype=float).ravel()
        if taps.size == 0:
            raise InvalidDenoiserError("FIR denoiser needs at least one tap")
        if not np.all(np.isfinite(taps)):
            raise InvalidDenoiserError("FIR taps must be finite")
        self.taps = taps
        super().__init__(divergence_mode)

    def _check_length(self, n: int) -> None:
        if self.taps.size > 1 and n <= self.taps.size:
            raise InvalidDimensionError(f"signal length {n} must exceed the filter length {self.taps.size}")

    def _apply(self, r: np.ndarray, gamma: float) -> np.ndarray:
        return fir_denoise(r, self.taps)

    def _analytic_divergence(self, r: np.ndarray, gamma: float) -> float:
        return float(self.taps[0])

    def lipschitz_bound(self, gamma: Optional[float] = None) -> float:
        """max |Ĥ(e^{iθ})| on a uniform frequency grid"""
        _, response = scipy.signal.freqz(self.taps, worN=FREQUENCY_GRID, whole=True)
        return float(np.max(np.abs(response)))

    def params(self) -> Dict[str, Any]:
        return {"taps": self.taps.tolist()}
