"""
Singular-value thresholding of an N₁×N₂ matrix (low-rank denoiser)
"""

from typing import Any, Dict, Optional, Tuple

import numpy as np

from denoisers.base import DenoiserKind, DenoiserSpec, DivergenceMode
from utils.exceptions import InvalidDenoiserError, InvalidDimensionError


def svt(matrix: np.ndarray, threshold: float) -> np.ndarray:
    """Σ (σ_i − threshold)₊ u_i v_iᵀ from a full dense SVD"""
    u, sigma, vt = np.linalg.svd(matrix, full_matrices=False)
    return (u * np.maximum(sigma - threshold, 0.0)) @ vt


class SingularValueThreshold(DenoiserSpec):
    """
    g(R, γ) = Σ (σ_i − γ)₊ u_i v_iᵀ with R the row-major N₁×N₂ view of r

    The second argument is the threshold itself. With `threshold_scale`
    λ the threshold becomes λ/√γ and γ is read as a precision instead.
    """

    kind = DenoiserKind.SVT
    has_analytic_divergence = False

    def __init__(
        self,
        shape: Tuple[int, int],
        threshold_scale: Optional[float] = None,
        divergence_mode: Optional[DivergenceMode] = None,
    ):
        n1, n2 = (int(d) for d in shape)
        if n1 < 1 or n2 < 1:
            raise InvalidDenoiserError(f"matrix shape must be positive, got {shape}")
        if threshold_scale is not None and not threshold_scale >= 0:
            raise InvalidDenoiserError(f"threshold scale must be ≥ 0, got {threshold_scale}")
        self.shape = (n1, n2)
        self.threshold_scale = None if threshold_scale is None else float(threshold_scale)
        super().__init__(divergence_mode)

    def _check_length(self, n: int) -> None:
        if n != self.shape[0] * self.shape[1]:
            raise InvalidDimensionError(f"cannot reshape {n} entries to {self.shape[0]}×{self.shape[1]}")

    def _check_gamma(self, gamma: float) -> None:
        if self.threshold_scale is not None:
            super()._check_gamma(gamma)
        elif not (np.isfinite(gamma) and gamma >= 0):
            raise InvalidDenoiserError(f"SVT threshold must be finite and ≥ 0, got {gamma}")

    def threshold(self, gamma: float) -> float:
        if self.threshold_scale is not None:
            return self.threshold_scale / np.sqrt(gamma)
        return gamma

    def _apply(self, r: np.ndarray, gamma: float) -> np.ndarray:
        return svt(r.reshape(self.shape), self.threshold(gamma)).ravel()

    def lipschitz_bound(self, gamma: Optional[float] = None) -> float:
        return 1.0

    def params(self) -> Dict[str, Any]:
        params: Dict[str, Any] = {"shape": list(self.shape)}
        if self.threshold_scale is not None:
            params["threshold_scale"] = self.threshold_scale
        return params
