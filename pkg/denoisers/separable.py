"""
Separable (componentwise) denoisers: soft-threshold, Bernoulli-Gaussian
MMSE, and soft-threshold in an orthonormal Haar wavelet domain
"""

from typing import Any, Dict, Optional, Tuple

import numpy as np
from scipy.special import expit

from denoisers.base import DenoiserKind, DenoiserSpec, DivergenceMode
from operators.wavelet import detail_mask, haar_wavelet_2d
from utils.exceptions import InvalidDenoiserError, InvalidDimensionError


def soft_threshold(r: np.ndarray, theta: float) -> np.ndarray:
    return np.sign(r) * np.maximum(np.abs(r) - theta, 0.0)


def bg_mmse_scalar(
    r: np.ndarray, gamma: float, rho: float, sigma_x2: float
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Posterior mean of x ~ ρ·N(0, σ²) + (1−ρ)·δ₀ observed as r = x + N(0, 1/γ)

    Works elementwise on arrays. The activity responsibility is computed
    from its log-odds so large γ cannot overflow.

    Returns:
        (x̂, dx̂/dr)
    """
    if not gamma > 0:
        raise InvalidDenoiserError(f"precision must be positive, got {gamma}")
    if not 0 < rho < 1:
        raise InvalidDenoiserError(f"sparsity must lie in (0, 1), got {rho}")
    if not sigma_x2 > 0:
        raise InvalidDenoiserError(f"prior variance must be positive, got {sigma_x2}")

    r = np.asarray(r, dtype=float)
    noise_var = 1.0 / gamma
    total = sigma_x2 + noise_var
    gain = sigma_x2 / total
    # d(log-odds)/dr = r·κ
    kappa = sigma_x2 / (noise_var * total)
    log_odds = (
        np.log(rho)
        - np.log1p(-rho)
        + 0.5 * np.log(noise_var / total)
        + 0.5 * kappa * r**2
    )
    active = expit(log_odds)
    inactive = expit(-log_odds)
    xhat = active * gain * r
    slope = gain * active * (1.0 + inactive * kappa * r**2)
    return xhat, slope


class _ThresholdMixin:
    """θ fixed, or θ = λ/√γ when a threshold scale λ is given"""

    threshold: Optional[float]
    threshold_scale: Optional[float]

    def _init_threshold(self, threshold: Optional[float], threshold_scale: Optional[float]) -> None:
        if (threshold is None) == (threshold_scale is None):
            raise InvalidDenoiserError("give exactly one of threshold or threshold_scale")
        value = threshold if threshold is not None else threshold_scale
        if not (np.isfinite(value) and value >= 0):
            raise InvalidDenoiserError(f"threshold must be finite and ≥ 0, got {value}")
        self.threshold = None if threshold is None else float(threshold)
        self.threshold_scale = None if threshold_scale is None else float(threshold_scale)

    def theta(self, gamma: float) -> float:
        if self.threshold_scale is not None:
            return self.threshold_scale / np.sqrt(gamma)
        return self.threshold

    def _threshold_params(self) -> Dict[str, Any]:
        if self.threshold_scale is not None:
            return {"threshold_scale": self.threshold_scale}
        return {"threshold": self.threshold}


class SoftThreshold(_ThresholdMixin, DenoiserSpec):
    """g(r) = sign(r)·max(|r| − θ, 0), divergence = fraction of |r| > θ"""

    kind = DenoiserKind.SOFT_THRESHOLD
    has_analytic_divergence = True

    def __init__(
        self,
        threshold: Optional[float] = None,
        threshold_scale: Optional[float] = None,
        divergence_mode: Optional[DivergenceMode] = None,
    ):
        self._init_threshold(threshold, threshold_scale)
        super().__init__(divergence_mode)

    def _apply(self, r: np.ndarray, gamma: float) -> np.ndarray:
        return soft_threshold(r, self.theta(gamma))

    def _analytic_divergence(self, r: np.ndarray, gamma: float) -> float:
        return float(np.mean(np.abs(r) > self.theta(gamma)))

    def lipschitz_bound(self, gamma: Optional[float] = None) -> float:
        return 1.0

    def params(self) -> Dict[str, Any]:
        return self._threshold_params()


class BernoulliGaussianMmse(DenoiserSpec):
    """Componentwise MMSE denoiser matched to a Bernoulli-Gaussian prior"""

    kind = DenoiserKind.BG_MMSE
    has_analytic_divergence = True

    def __init__(
        self,
        rho: float,
        sigma_x2: float = 1.0,
        divergence_mode: Optional[DivergenceMode] = None,
    ):
        if not 0 < rho < 1:
            raise InvalidDenoiserError(f"sparsity must lie in (0, 1), got {rho}")
        if not sigma_x2 > 0:
            raise InvalidDenoiserError(f"prior variance must be positive, got {sigma_x2}")
        self.rho = float(rho)
        self.sigma_x2 = float(sigma_x2)
        super().__init__(divergence_mode)

    def _apply(self, r: np.ndarray, gamma: float) -> np.ndarray:
        return bg_mmse_scalar(r, gamma, self.rho, self.sigma_x2)[0]

    def _analytic_divergence(self, r: np.ndarray, gamma: float) -> float:
        return float(np.mean(bg_mmse_scalar(r, gamma, self.rho, self.sigma_x2)[1]))

    def lipschitz_bound(self, gamma: Optional[float] = None) -> float:
        """Largest posterior-mean slope at precision γ (default 1), found on a grid"""
        gamma = 1.0 if gamma is None else float(gamma)
        spread = 20.0 * np.sqrt(self.sigma_x2 + 1.0 / gamma)
        grid = np.linspace(-spread, spread, 200001)
        return float(np.max(bg_mmse_scalar(grid, gamma, self.rho, self.sigma_x2)[1]))

    def params(self) -> Dict[str, Any]:
        return {"rho": self.rho, "sigma_x2": self.sigma_x2}


class WaveletSoftThreshold(_ThresholdMixin, DenoiserSpec):
    """
    Soft-threshold of the Haar detail coefficients of an L×L image

    The approximation band passes through untouched. Since the transform
    is orthonormal the divergence is the fraction of coefficients kept.
    """

    kind = DenoiserKind.WAVELET_SOFT_THRESHOLD
    has_analytic_divergence = True

    def __init__(
        self,
        side: int,
        levels: int,
        threshold: Optional[float] = None,
        threshold_scale: Optional[float] = None,
        divergence_mode: Optional[DivergenceMode] = None,
    ):
        self._init_threshold(threshold, threshold_scale)
        self.side = int(side)
        self.levels = int(levels)
        self._mask = detail_mask(self.side, self.levels)
        super().__init__(divergence_mode)

    def _check_length(self, n: int) -> None:
        if n != self.side * self.side:
            raise InvalidDimensionError(f"expected {self.side}×{self.side} = {self.side ** 2} pixels, got {n}")

    def _apply(self, r: np.ndarray, gamma: float) -> np.ndarray:
        coeffs = haar_wavelet_2d(r.reshape(self.side, self.side), self.levels, "forward")
        coeffs[self._mask] = soft_threshold(coeffs[self._mask], self.theta(gamma))
        return haar_wavelet_2d(coeffs, self.levels, "inverse").ravel()

    def _analytic_divergence(self, r: np.ndarray, gamma: float) -> float:
        coeffs = haar_wavelet_2d(r.reshape(self.side, self.side), self.levels, "forward")
        kept = np.count_nonzero(np.abs(coeffs[self._mask]) > self.theta(gamma))
        approx = coeffs.size - np.count_nonzero(self._mask)
        return float(kept + approx) / coeffs.size

    def lipschitz_bound(self, gamma: Optional[float] = None) -> float:
        return 1.0

    def params(self) -> Dict[str, Any]:
        return {"side": self.side, "levels": self.levels, **self._threshold_params()}
