"""
Vector AMP (LMMSE form)

Each iteration runs the plug-in denoiser on (r₁, γ₁), turns its output into
an extrinsic message (r₂, γ₂) for the LMMSE stage, and turns the LMMSE
output back into a new (r₁, γ₁).
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
from loguru import logger

from config.settings import settings
from denoisers.base import DenoiserSpec
from solvers.lmmse import lmmse_estimate
from solvers.problem import ProblemInstance
from utils.constants import (
    ALPHA_EPS,
    DEFAULT_GAMMA10,
    DEFAULT_ITERATIONS,
    DEFAULT_TAU10,
)
from utils.exceptions import ConfigError, InvalidDimensionError, NonFiniteStateError
from utils.rng import derive_seed, make_rng

VAMP_COLUMNS = (
    "k",
    "gamma1",
    "alpha1",
    "eta1",
    "gamma2",
    "alpha2",
    "eta2",
    "mse1",
    "mse2",
    "clamped_flag",
)

# seed streams under the config seed
INIT_STREAM = 0
DIVERGENCE_STREAM = 1


class InitMode(str, Enum):
    ZERO_R = "zero-r"
    SE_ORACLE = "se-oracle"
    CUSTOM = "custom"


@dataclass
class VampConfig:
    """
    Attributes:
        iterations: Number of full iterations K_it
        gamma_min, gamma_max: Clamp applied to every precision; default to
            PNPVAMP_GAMMA_MIN / PNPVAMP_GAMMA_MAX
        init_mode: zero-r (r₁₀ = 0), se-oracle (r₁₀ = x0 + N(0, τ₁₀I)) or custom
        gamma10: Initial precision; defaults to DEFAULT_GAMMA10 for zero-r
            and 1/τ₁₀ for se-oracle, required for custom
        tau10: Initial error variance for se-oracle
        seed: Master seed for the oracle init and divergence probes
        damping: Weight on the new x̂₁ and α₁ (1 = no damping)
        tol: Stop early once ‖x̂₁ₖ − x̂₁,ₖ₋₁‖²/N < tol (0 = never)
    """

    iterations: int = DEFAULT_ITERATIONS
    gamma_min: Optional[float] = None
    gamma_max: Optional[float] = None
    init_mode: InitMode = InitMode.ZERO_R
    gamma10: Optional[float] = None
    tau10: float = DEFAULT_TAU10
    seed: int = 0
    damping: float = 1.0
    tol: float = 0.0

    def __post_init__(self):
        self.init_mode = InitMode(self.init_mode)
        if self.gamma_min is None:
            self.gamma_min = settings.gamma_min
        if self.gamma_max is None:
            self.gamma_max = settings.gamma_max
        if self.iterations < 1:
            raise ConfigError(f"iterations must be at least 1, got {self.iterations}")
        if not 0 < self.gamma_min < self.gamma_max:
            raise ConfigError(f"need 0 < gamma_min < gamma_max, got {self.gamma_min}, {self.gamma_max}")
        if not 0 < self.damping <= 1:
            raise ConfigError(f"damping must lie in (0, 1], got {self.damping}")
        if self.tau10 <= 0:
            raise ConfigError(f"tau10 must be positive, got {self.tau10}")
        if self.init_mode == InitMode.CUSTOM and self.gamma10 is None:
            raise ConfigError("custom init needs gamma10")
        if self.gamma10 is not None and self.gamma10 < 0:
            raise ConfigError(f"gamma10 must be ≥ 0, got {self.gamma10}")

    def initial_gamma(self) -> float:
        if self.gamma10 is not None:
            gamma = self.gamma10
        elif self.init_mode == InitMode.SE_ORACLE:
            gamma = 1.0 / self.tau10
        else:
            gamma = DEFAULT_GAMMA10
        return float(np.clip(gamma, self.gamma_min, self.gamma_max))

    def clamp(self, gamma: float) -> Tuple[float, bool]:
        clipped = float(np.clip(gamma, self.gamma_min, self.gamma_max))
        return clipped, clipped != gamma


def divergence_seed(master_seed: int, k: int) -> int:
    """Probe seed used by iteration k"""
    return derive_seed(master_seed, DIVERGENCE_STREAM, k)


def oracle_initial_r1(x0: np.ndarray, tau10: float, master_seed: int) -> np.ndarray:
    """r₁₀ = x0 + N(0, τ₁₀·I)"""
    noise = make_rng(derive_seed(master_seed, INIT_STREAM)).standard_normal(x0.size)
    return x0 + np.sqrt(tau10) * noise


@dataclass
class VampState:
    """Everything computed in one iteration"""

    k: int
    r1: np.ndarray
    gamma1: float
    xhat1: np.ndarray
    alpha1: float
    eta1: float
    r2: np.ndarray
    gamma2: float
    xhat2: np.ndarray
    alpha2: float
    eta2: float
    clamped: bool = False
    degenerate: bool = False

    def to_row(self, x0: Optional[np.ndarray] = None) -> Dict[str, Any]:
        row: Dict[str, Any] = {
            "k": self.k,
            "gamma1": self.gamma1,
            "alpha1": self.alpha1,
            "eta1": self.eta1,
            "gamma2": self.gamma2,
            "alpha2": self.alpha2,
            "eta2": self.eta2,
            "clamped_flag": self.clamped,
        }
        if x0 is not None:
            row["mse1"] = float(np.mean((self.xhat1 - x0) ** 2))
            row["mse2"] = float(np.mean((self.xhat2 - x0) ** 2))
        return row


@dataclass
class VampTrajectory:
    states: List[VampState] = field(default_factory=list)
    final_xhat: Optional[np.ndarray] = None
    final_r1: Optional[np.ndarray] = None
    final_gamma1: Optional[float] = None
    x0: Optional[np.ndarray] = None
    stopped_early: bool = False

    @property
    def clamped(self) -> bool:
        return any(s.clamped for s in self.states)

    @property
    def degenerate(self) -> bool:
        return any(s.degenerate for s in self.states)

    def mse1(self) -> List[float]:
        if self.x0 is None:
            raise InvalidDimensionError("trajectory has no truth attached")
        return [float(np.mean((s.xhat1 - self.x0) ** 2)) for s in self.states]

    def final_mse(self) -> float:
        if self.x0 is None or self.final_xhat is None:
            raise InvalidDimensionError("trajectory has no truth or final estimate")
        return float(np.mean((self.final_xhat - self.x0) ** 2))

    def rows(self) -> List[Dict[str, Any]]:
        return [s.to_row(self.x0) for s in self.states]


def _check_finite(k: int, **values: Any) -> None:
    for name, value in values.items():
        if not np.all(np.isfinite(value)):
            raise NonFiniteStateError(f"VAMP produced a non-finite {name}", iteration=k)


def vamp_run(
    instance: ProblemInstance,
    denoiser: DenoiserSpec,
    config: VampConfig,
    initial_r1: Optional[np.ndarray] = None,
) -> VampTrajectory:
    """
    Run VAMP for config.iterations iterations

    Args:
        instance: Problem (x0 is only used for the oracle init and MSE rows)
        denoiser: Plug-in denoiser g₁
        config: Iteration count, clamps, initialization and seeds
        initial_r1: r₁₀ for custom init

    Returns:
        VampTrajectory with every state and x̂₁ = g₁(r₁,K, γ₁,K)
    """
    n = instance.n
    if config.init_mode == InitMode.CUSTOM:
        if initial_r1 is None:
            raise ConfigError("custom init needs initial_r1")
        r1 = np.asarray(initial_r1, dtype=float).copy()
        if r1.shape != (n,):
            raise InvalidDimensionError(f"initial_r1 must have length {n}")
    elif config.init_mode == InitMode.SE_ORACLE:
        r1 = oracle_initial_r1(instance.x0, config.tau10, config.seed)
    else:
        r1 = np.zeros(n)
    gamma1 = config.initial_gamma()

    trajectory = VampTrajectory(x0=instance.x0)
    prev_x1: Optional[np.ndarray] = None
    prev_a1: Optional[float] = None

    for k in range(config.iterations):
        # denoising half
        x1 = denoiser.denoise(r1, gamma1)
        alpha1 = denoiser.divergence(r1, gamma1, seed=divergence_seed(config.seed, k), baseline=x1).value
        if config.damping < 1.0 and prev_x1 is not None:
            x1 = config.damping * x1 + (1 - config.damping) * prev_x1
            alpha1 = config.damping * alpha1 + (1 - config.damping) * prev_a1

        degenerate = not ALPHA_EPS < alpha1 < 1 - ALPHA_EPS
        a1 = float(np.clip(alpha1, ALPHA_EPS, 1 - ALPHA_EPS))
        eta1 = gamma1 / a1
        gamma2, clamped2 = config.clamp(eta1 - gamma1)
        r2 = (eta1 * x1 - gamma1 * r1) / gamma2
        _check_finite(k, xhat1=x1, alpha1=alpha1, r2=r2)

        # LMMSE half
        x2, alpha2 = lmmse_estimate(r2, gamma2, instance)
        degenerate = degenerate or not ALPHA_EPS < alpha2 < 1 - ALPHA_EPS
        a2 = float(np.clip(alpha2, ALPHA_EPS, 1 - ALPHA_EPS))
        eta2 = gamma2 / a2
        gamma1_next, clamped1 = config.clamp(eta2 - gamma2)
        r1_next = (eta2 * x2 - gamma2 * r2) / gamma1_next
        _check_finite(k, xhat2=x2, r1=r1_next)

        state = VampState(
            k=k,
            r1=r1,
            gamma1=gamma1,
            xhat1=x1,
            alpha1=float(alpha1),
            eta1=eta1,
            r2=r2,
            gamma2=gamma2,
            xhat2=x2,
            alpha2=alpha2,
            eta2=eta2,
            clamped=clamped1 or clamped2,
            degenerate=degenerate,
        )
        trajectory.states.append(state)
        logger.debug(
            f"VAMP k={k}: gamma1={gamma1:.4g} alpha1={alpha1:.4g} gamma2={gamma2:.4g} alpha2={alpha2:.4g}"
        )
        if state.clamped:
            logger.warning(f"⚠️  VAMP k={k}: precision clamped to [{config.gamma_min:g}, {config.gamma_max:g}]")
        if degenerate:
            logger.warning(f"⚠️  VAMP k={k}: divergence left (ε, 1−ε) (alpha1={alpha1:.3g}, alpha2={alpha2:.3g})")

        converged = (
            config.tol > 0
            and prev_x1 is not None
            and float(np.mean((x1 - prev_x1) ** 2)) < config.tol
        )
        prev_x1, prev_a1 = x1, alpha1
        r1, gamma1 = r1_next, gamma1_next
        if converged:
            trajectory.stopped_early = True
            logger.debug(f"VAMP converged after {k + 1} iterations")
            break

    trajectory.final_r1 = r1
    trajectory.final_gamma1 = gamma1
    trajectory.final_xhat = denoiser.denoise(r1, gamma1)
    return trajectory
