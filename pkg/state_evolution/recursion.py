"""
State evolution of VAMP

Scalar recursion over (τ₁, γ̄₁) → (τ₂, γ̄₂) → (τ₁, γ̄₁) that predicts the
per-iteration MSE 1/η̄ᵢ of the algorithm for a fixed truth x0:

    ᾱ₁ = A₁(γ̄₁, τ₁),  η̄₁ = γ̄₁/ᾱ₁,  γ̄₂ = η̄₁ − γ̄₁
    τ₂ = [E₁(γ̄₁, τ₁) − ᾱ₁²τ₁] / (1 − ᾱ₁)²
    ᾱ₂ = A₂(γ̄₂),  η̄₂ = γ̄₂/ᾱ₂,  γ̄₁' = η̄₂ − γ̄₂
    τ₁' = [E₂(γ̄₂, τ₂) − ᾱ₂²τ₂] / (1 − ᾱ₂)²
"""

from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Optional

import numpy as np
from loguru import logger

from config.settings import settings
from denoisers.base import DenoiserSpec
from operators.spectral import Spectrum
from state_evolution.denoiser_functions import error_and_sensitivity
from state_evolution.lmmse_functions import lmmse_error_E2, lmmse_sensitivity_A2
from utils.constants import ALPHA_EPS, SE_TRIALS
from utils.exceptions import InvalidDimensionError
from utils.metrics import to_db

SE_COLUMNS = (
    "k",
    "tau1",
    "tau2",
    "gbar1",
    "gbar2",
    "abar1",
    "abar2",
    "mse1_db",
    "mse2_db",
    "e1_stderr",
    "a1_stderr",
    "e1_direct_db",
)


@dataclass
class SeState:
    k: int
    tau1: float
    tau2: float
    gbar1: float
    gbar2: float
    abar1: float
    abar2: float
    ebar1: float
    ebar2: float
    e1_direct: float
    e1_stderr: float = 0.0
    a1_stderr: float = 0.0

    @property
    def mse1(self) -> float:
        return 1.0 / self.ebar1

    @property
    def mse2(self) -> float:
        return 1.0 / self.ebar2

    def to_row(self) -> Dict[str, Any]:
        return {
            "k": self.k,
            "tau1": self.tau1,
            "tau2": self.tau2,
            "gbar1": self.gbar1,
            "gbar2": self.gbar2,
            "abar1": self.abar1,
            "abar2": self.abar2,
            "mse1_db": to_db(self.mse1),
            "mse2_db": to_db(self.mse2),
            "e1_stderr": self.e1_stderr,
            "a1_stderr": self.a1_stderr,
            "e1_direct_db": to_db(self.e1_direct),
        }

    def to_dict(self) -> Dict[str, Any]:
        return {**asdict(self), "mse1": self.mse1, "mse2": self.mse2}


@dataclass
class SeTrajectory:
    """SE states, plus the reason and iteration at which the run was cut short"""

    states: List[SeState] = field(default_factory=list)
    violation: Optional[str] = None
    violated_at: Optional[int] = None

    @property
    def valid(self) -> bool:
        return self.violation is None

    def mse1(self) -> List[float]:
        return [s.mse1 for s in self.states]

    def rows(self) -> List[Dict[str, Any]]:
        return [s.to_row() for s in self.states]


def sensitivity_in_range(alpha: float) -> bool:
    return bool(np.isfinite(alpha)) and ALPHA_EPS < alpha < 1 - ALPHA_EPS


def _variance_ok(tau: float) -> bool:
    return bool(np.isfinite(tau)) and tau > 0


def se_run(
    denoiser: DenoiserSpec,
    x0: np.ndarray,
    spectrum: Spectrum,
    gamma_w: float,
    gamma_w0: float,
    tau10: float,
    gbar10: float,
    iterations: int,
    mc_trials: int = SE_TRIALS,
    seed: int = 0,
) -> SeTrajectory:
    """
    Iterate the SE equations for `iterations` steps

    The denoiser half uses Monte Carlo over `mc_trials` draws around the fixed
    x0 (trial seeds derived from (seed, k, trial)); the LMMSE half uses the
    spectrum closed forms. A sensitivity leaving (0, 1), or a variance that
    stops being positive, truncates the trajectory and records why.
    """
    if not tau10 > 0:
        raise InvalidDimensionError(f"tau10 must be positive, got {tau10}")
    x0 = np.asarray(x0, dtype=float)
    trajectory = SeTrajectory()
    tau1 = float(tau10)
    gbar1 = max(float(gbar10), settings.gamma_min)

    def stop(k: int, reason: str) -> SeTrajectory:
        trajectory.violation, trajectory.violated_at = reason, k
        logger.warning(f"⚠️  SE stopped at k={k}: {reason}")
        return trajectory

    for k in range(iterations):
        e1, a1 = error_and_sensitivity(denoiser, x0, gbar1, tau1, mc_trials, seed, iteration=k)
        abar1 = a1.value
        if not sensitivity_in_range(abar1):
            return stop(k, f"abar1={abar1:.6g} outside (0, 1)")
        ebar1 = gbar1 / abar1
        gbar2 = ebar1 - gbar1
        tau2 = (e1.value - abar1**2 * tau1) / (1 - abar1) ** 2
        if not (gbar2 > 0 and _variance_ok(tau2)):
            return stop(k, f"gbar2={gbar2:.6g}, tau2={tau2:.6g} not positive")

        abar2 = lmmse_sensitivity_A2(gbar2, spectrum, gamma_w)
        if not sensitivity_in_range(abar2):
            return stop(k, f"abar2={abar2:.6g} outside (0, 1)")
        ebar2 = gbar2 / abar2
        gbar1_next = ebar2 - gbar2
        e2 = lmmse_error_E2(gbar2, tau2, spectrum, gamma_w, gamma_w0)
        tau1_next = (e2 - abar2**2 * tau2) / (1 - abar2) ** 2

        trajectory.states.append(
            SeState(
                k=k,
                tau1=tau1,
                tau2=tau2,
                gbar1=gbar1,
                gbar2=gbar2,
                abar1=abar1,
                abar2=abar2,
                ebar1=ebar1,
                ebar2=ebar2,
                e1_direct=e1.value,
                e1_stderr=e1.std_error,
                a1_stderr=a1.std_error,
            )
        )
        logger.debug(
            f"SE k={k}: tau1={tau1:.4g} abar1={abar1:.4g} tau2={tau2:.4g} abar2={abar2:.4g} "
            f"mse1={to_db(1.0 / ebar1):.2f} dB"
        )
        if not (gbar1_next > 0 and _variance_ok(tau1_next)):
            return stop(k + 1, f"gbar1={gbar1_next:.6g}, tau1={tau1_next:.6g} not positive")
        tau1, gbar1 = tau1_next, gbar1_next

    return trajectory
