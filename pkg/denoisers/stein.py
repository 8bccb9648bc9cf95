"""
Stein-identity check for denoisers

For (z₁, z₂) jointly Gaussian with covariance S, a denoiser convergent
under Gaussian noise satisfies ⟨∇g(u + z₁)⟩ ≈ g(u + z₁)ᵀz₂ / (N·S₁₂)
at large N.
"""

from dataclasses import asdict, dataclass
from typing import Any, Dict

import numpy as np

from denoisers.base import DenoiserSpec
from utils.constants import STEIN_MIN_OFFDIAG
from utils.exceptions import InvalidDenoiserError
from utils.rng import derive_seed, make_rng


@dataclass(frozen=True)
class SteinCheck:
    lhs: float
    rhs: float

    @property
    def gap(self) -> float:
        return abs(self.lhs - self.rhs)

    def to_dict(self) -> Dict[str, Any]:
        return {**asdict(self), "gap": self.gap}


def stein_identity_check(
    spec: DenoiserSpec,
    x0: np.ndarray,
    covariance: np.ndarray,
    gamma: float,
    seed: int,
) -> SteinCheck:
    """
    Compare the divergence with its Stein cross-estimator

    Args:
        spec: Denoiser under test
        x0: Clean vector u
        covariance: 2×2 positive-definite covariance of (z₁, z₂)
        gamma: Precision handed to the denoiser
        seed: Seed for the Gaussian pair and any divergence probes

    Returns:
        SteinCheck(lhs = ⟨∇g(u + z₁)⟩, rhs = g(u + z₁)ᵀz₂ / (N·S₁₂))
    """
    cov = np.asarray(covariance, dtype=float)
    if cov.shape != (2, 2) or not np.allclose(cov, cov.T):
        raise InvalidDenoiserError(f"covariance must be a symmetric 2×2 matrix, got {cov.tolist()}")
    if abs(cov[0, 1]) < STEIN_MIN_OFFDIAG:
        raise InvalidDenoiserError("S12 is zero; the Stein cross-estimator is undefined")
    try:
        chol = np.linalg.cholesky(cov)
    except np.linalg.LinAlgError as e:
        raise InvalidDenoiserError(f"covariance is not positive definite: {cov.tolist()}") from e

    x0 = np.asarray(x0, dtype=float)
    n = x0.size
    z = chol @ make_rng(seed).standard_normal((2, n))
    r = x0 + z[0]
    g = spec.denoise(r, gamma)
    lhs = spec.divergence(r, gamma, seed=derive_seed(seed, 1), baseline=g).value
    rhs = float(g @ z[1]) / (n * cov[0, 1])
    return SteinCheck(lhs=float(lhs), rhs=rhs)
