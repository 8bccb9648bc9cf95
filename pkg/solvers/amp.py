"""
AMP baseline with Onsager correction

    x̂_k = g(r_k, γ_k)
    v_k = y − A·x̂_k + (N/M)·⟨∇g(r_k, γ_k)⟩·v_{k−1}
    r_{k+1} = x̂_k + Aᵀv_k,   γ_{k+1} = M/‖v_k‖²

started from r₀ = Aᵀy, γ₀ = M/‖y‖², v₋₁ = 0.
"""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

import numpy as np
from loguru import logger

from config.settings import settings
from denoisers.base import DenoiserSpec
from solvers.problem import ProblemInstance
from utils.constants import (
    AMP_DIVERGENCE_FACTOR,
    AMP_DIVERGENCE_PATIENCE,
)
from utils.rng import derive_seed

AMP_COLUMNS = ("k", "gamma1", "alpha1", "mse1", "diverged_flag")


@dataclass
class AmpState:
    k: int
    xhat: np.ndarray
    v: np.ndarray
    r: np.ndarray
    gamma: float
    onsager: np.ndarray
    alpha: float
    mse: float

    def to_row(self, diverged: bool = False) -> Dict[str, Any]:
        return {
            "k": self.k,
            "gamma1": self.gamma,
            "alpha1": self.alpha,
            "mse1": self.mse,
            "diverged_flag": diverged,
        }


@dataclass
class AmpTrajectory:
    states: List[AmpState] = field(default_factory=list)
    diverged: bool = False
    diverged_at: Optional[int] = None

    @property
    def final_xhat(self) -> Optional[np.ndarray]:
        return self.states[-1].xhat if self.states else None

    def final_mse(self) -> float:
        return self.states[-1].mse if self.states else float("nan")

    def rows(self) -> List[Dict[str, Any]]:
        return [
            s.to_row(self.diverged_at is not None and s.k >= self.diverged_at) for s in self.states
        ]


def amp_run(
    instance: ProblemInstance,
    denoiser: DenoiserSpec,
    iterations: int,
    seed: int = 0,
    onsager: bool = True,
) -> AmpTrajectory:
    """
    Run AMP and watch for divergence

    The run halts (flagged diverged) once the MSE has stayed above
    AMP_DIVERGENCE_FACTOR × the first iterate's MSE for
    AMP_DIVERGENCE_PATIENCE consecutive iterations, or when any iterate
    becomes non-finite.

    Args:
        instance: Problem; A is assumed scaled so that ‖A‖_F² ≈ N
        denoiser: Plug-in denoiser, γ_k is passed as its precision
        iterations: Maximum number of iterations
        seed: Master seed for Monte Carlo divergence probes
        onsager: False drops the memory term (iterative thresholding)
    """
    op = instance.operator
    m, n = op.m, op.n
    y = instance.y
    x0 = instance.x0

    gamma_min, gamma_max = settings.gamma_min, settings.gamma_max
    r = op.adjoint(y)
    gamma = float(np.clip(m / max(float(y @ y), 1e-300), gamma_min, gamma_max))
    v_prev = np.zeros(m)

    trajectory = AmpTrajectory()
    reference: Optional[float] = None
    strikes = 0
    signal_power = float(np.mean(x0**2))

    for k in range(iterations):
        try:
            xhat = denoiser.denoise(r, gamma)
            alpha = denoiser.divergence(r, gamma, seed=derive_seed(seed, k), baseline=xhat).value
        except ValueError as e:
            logger.warning(f"⚠️  AMP k={k}: denoiser rejected the iterate ({e}); flagged diverged")
            trajectory.diverged, trajectory.diverged_at = True, k
            break

        memory = (n / m) * alpha * v_prev if onsager else np.zeros(m)
        v = y - op.forward(xhat) + memory
        error = float(np.mean((xhat - x0) ** 2))
        trajectory.states.append(
            AmpState(k=k, xhat=xhat, v=v, r=r, gamma=gamma, onsager=memory, alpha=alpha, mse=error)
        )
        logger.debug(f"AMP k={k}: gamma={gamma:.4g} alpha={alpha:.4g} mse={error:.4g}")

        if not (np.all(np.isfinite(v)) and np.isfinite(error)):
            logger.warning(f"⚠️  AMP k={k}: non-finite iterate, halting")
            trajectory.diverged, trajectory.diverged_at = True, k
            break

        if reference is None:
            reference = max(error, 1e-12 * signal_power)
        strikes = strikes + 1 if error > AMP_DIVERGENCE_FACTOR * reference else 0
        if strikes >= AMP_DIVERGENCE_PATIENCE:
            logger.warning(f"⚠️  AMP diverged at k={k} (mse={error:.3g}, initial {reference:.3g})")
            trajectory.diverged = True
            trajectory.diverged_at = k - AMP_DIVERGENCE_PATIENCE + 1
            break

        r = xhat + op.adjoint(v)
        energy = float(v @ v)
        gamma = gamma_max if energy == 0.0 else float(np.clip(m / energy, gamma_min, gamma_max))
        v_prev = v

    return trajectory
