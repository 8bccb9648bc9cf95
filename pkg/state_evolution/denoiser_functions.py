"""
Monte Carlo error and sensitivity functions of a plug-in denoiser

E₁(γ₁, τ₁) = (1/N)‖g₁(x0 + z, γ₁) − x0‖² and A₁(γ₁, τ₁) = ⟨∇g₁(x0 + z, γ₁)⟩
with z ~ N(0, τ₁I), averaged over independent draws of z for a fixed x0.
Each trial owns a derived seed so results do not depend on evaluation order.
"""

from dataclasses import dataclass
from typing import Any, Dict, Optional, Tuple

import numpy as np

from denoisers.base import DenoiserSpec
from utils.constants import SE_TRIALS
from utils.exceptions import InvalidDimensionError
from utils.rng import derive_seed, make_rng

NOISE_STREAM = 0
PROBE_STREAM = 1


@dataclass(frozen=True)
class MonteCarloEstimate:
    value: float
    std_error: float
    trials: int

    def to_dict(self) -> Dict[str, Any]:
        return {"value": self.value, "std_error": self.std_error, "trials": self.trials}


def _summarize(samples: np.ndarray) -> MonteCarloEstimate:
    n = samples.size
    std_error = float(np.std(samples, ddof=1) / np.sqrt(n)) if n > 1 else 0.0
    return MonteCarloEstimate(value=float(np.mean(samples)), std_error=std_error, trials=n)


def error_and_sensitivity(
    denoiser: DenoiserSpec,
    x0: np.ndarray,
    gamma1: float,
    tau1: float,
    trials: int = SE_TRIALS,
    seed: int = 0,
    iteration: Optional[int] = None,
) -> Tuple[MonteCarloEstimate, MonteCarloEstimate]:
    """
    E₁ and A₁ estimated jointly over the same noise draws

    Args:
        denoiser: g₁
        x0: Fixed truth
        gamma1: Precision handed to the denoiser
        tau1: Variance of the Gaussian perturbation
        trials: Number of z draws
        seed: Master seed
        iteration: Optional SE iteration index folded into the trial seeds

    Returns:
        (E₁ estimate, A₁ estimate), each with its standard error
    """
    if not tau1 > 0:
        raise InvalidDimensionError(f"tau1 must be positive, got {tau1}")
    if trials < 1:
        raise InvalidDimensionError(f"need at least one trial, got {trials}")
    x0 = np.asarray(x0, dtype=float)
    prefix = () if iteration is None else (iteration,)

    errors = np.empty(trials)
    sensitivities = np.empty(trials)
    std = np.sqrt(tau1)
    for t in range(trials):
        z = make_rng(derive_seed(seed, *prefix, t, NOISE_STREAM)).standard_normal(x0.size)
        r = x0 + std * z
        xhat = denoiser.denoise(r, gamma1)
        errors[t] = float(np.mean((xhat - x0) ** 2))
        sensitivities[t] = denoiser.divergence(
            r, gamma1, seed=derive_seed(seed, *prefix, t, PROBE_STREAM), baseline=xhat
        ).value
    return _summarize(errors), _summarize(sensitivities)


def denoiser_error_E1(
    denoiser: DenoiserSpec,
    x0: np.ndarray,
    gamma1: float,
    tau1: float,
    trials: int = SE_TRIALS,
    seed: int = 0,
) -> MonteCarloEstimate:
    return error_and_sensitivity(denoiser, x0, gamma1, tau1, trials, seed)[0]


def denoiser_sensitivity_A1(
    denoiser: DenoiserSpec,
    x0: np.ndarray,
    gamma1: float,
    tau1: float,
    trials: int = SE_TRIALS,
    seed: int = 0,
) -> MonteCarloEstimate:
    return error_and_sensitivity(denoiser, x0, gamma1, tau1, trials, seed)[1]


def stein_sensitivity_A1(
    denoiser: DenoiserSpec,
    x0: np.ndarray,
    gamma1: float,
    tau1: float,
    trials: int = SE_TRIALS,
    seed: int = 0,
    correlation: float = 0.5,
) -> MonteCarloEstimate:
    """
    A₁ through the Stein cross-estimator g(x0 + z₁)ᵀz₂ / (N·S₁₂)

    (z₁, z₂) has covariance [[τ₁, c·τ₁], [c·τ₁, τ₁]] with c = correlation,
    so no divergence of the denoiser is ever evaluated.
    """
    if not 0 < abs(correlation) < 1:
        raise InvalidDimensionError(f"correlation must lie in (−1, 1) \\ {{0}}, got {correlation}")
    x0 = np.asarray(x0, dtype=float)
    n = x0.size
    s12 = correlation * tau1
    chol = np.linalg.cholesky(np.array([[tau1, s12], [s12, tau1]]))
    samples = np.empty(trials)
    for t in range(trials):
        z = chol @ make_rng(derive_seed(seed, t, NOISE_STREAM)).standard_normal((2, n))
        g = denoiser.denoise(x0 + z[0], gamma1)
        samples[t] = float(g @ z[1]) / (n * s12)
    return _summarize(samples)
