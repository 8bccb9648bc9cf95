"""
Generalized two-block recursion and its state evolution

    p_k = V·u_k
    α₁ = ⟨∂f_p(p_k, w^p, γ₁)⟩,  γ₂ = Γ₁(γ₁, α₁)
    v_k = C₁(α₁)·[f_p(p_k, w^p, γ₁) − α₁·p_k]
    q_k = Vᵀ·v_k
    α₂ = ⟨∂f_q(q_k, w^q, γ₂)⟩,  γ₁' = Γ₂(γ₂, α₂)
    u_{k+1} = C₂(α₂)·[f_q(q_k, w^q, γ₂) − α₂·q_k]

VAMP is the instance with f_p(p) = g₁(p + x0) − x0, f_q the LMMSE error
map in the V basis, Cᵢ(α) = 1/(1 − α) and Γᵢ(γ, α) = γ(1/α − 1); in that
case p_k = r₁ₖ − x0 and q_k = Vᵀ(r₂ₖ − x0).
"""

from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional

import numpy as np
from loguru import logger

from config.settings import settings
from denoisers.base import DenoiserSpec
from operators.spectral import OrthogonalMap, Spectrum
from solvers.problem import ProblemInstance
from solvers.vamp import InitMode, VampConfig, divergence_seed, oracle_initial_r1
from state_evolution.denoiser_functions import error_and_sensitivity
from state_evolution.lmmse_functions import lmmse_error_E2, lmmse_sensitivity_A2
from state_evolution.recursion import sensitivity_in_range
from utils.constants import SE_TRIALS
from utils.exceptions import ConfigError, InvalidDimensionError, NonFiniteStateError

# (vector, disturbance, precision, iteration) -> vector / divergence
UpdateMap = Callable[[np.ndarray, Any, float, int], np.ndarray]
DivergenceMap = Callable[[np.ndarray, Any, float, int], float]
PrecisionUpdate = Callable[[float, float], float]
Scaling = Callable[[float], float]
# (precision, variance, iteration) -> scalar
SeFunction = Callable[[float, float, int], float]


def vamp_precision_update(gamma: float, alpha: float) -> float:
    """Γ(γ, α) = γ(1/α − 1), evaluated as γ/α − γ"""
    return gamma / alpha - gamma


def vamp_scaling(alpha: float) -> float:
    return 1.0 / (1.0 - alpha)


@dataclass
class GenRecursionSpec:
    """
    Attributes:
        fp, fq: Update maps f(x, w, γ, k)
        div_p, div_q: Their normalized divergences in x
        gamma1_update, gamma2_update: Γ₁ and Γ₂
        c1, c2: C₁ and C₂
        u0: Initial vector
        gamma10: Initial precision
        v: Orthogonal map V
        wp, wq: Disturbances handed to fp and fq
    """

    fp: UpdateMap
    fq: UpdateMap
    div_p: DivergenceMap
    div_q: DivergenceMap
    gamma1_update: PrecisionUpdate
    gamma2_update: PrecisionUpdate
    c1: Scaling
    c2: Scaling
    u0: np.ndarray
    gamma10: float
    v: OrthogonalMap
    wp: Any = None
    wq: Any = None

    def __post_init__(self):
        self.u0 = np.asarray(self.u0, dtype=float)
        if self.u0.shape != (self.v.dim,):
            raise InvalidDimensionError(f"u0 must have length {self.v.dim}, got shape {self.u0.shape}")


@dataclass
class GenRecursionState:
    k: int
    u: np.ndarray
    p: np.ndarray
    v: np.ndarray
    q: np.ndarray
    gamma1: float
    alpha1: float
    gamma2: float
    alpha2: float


def general_recursion_run(spec: GenRecursionSpec, iterations: int) -> List[GenRecursionState]:
    """Run the recursion verbatim; raises NonFiniteStateError on NaN/inf"""
    u = spec.u0.copy()
    gamma1 = float(spec.gamma10)
    states: List[GenRecursionState] = []

    for k in range(iterations):
        p = spec.v.apply(u)
        fp = spec.fp(p, spec.wp, gamma1, k)
        alpha1 = float(spec.div_p(p, spec.wp, gamma1, k))
        gamma2 = spec.gamma1_update(gamma1, alpha1)
        v = spec.c1(alpha1) * (fp - alpha1 * p)

        q = spec.v.adjoint(v)
        fq = spec.fq(q, spec.wq, gamma2, k)
        alpha2 = float(spec.div_q(q, spec.wq, gamma2, k))
        gamma1_next = spec.gamma2_update(gamma2, alpha2)
        u_next = spec.c2(alpha2) * (fq - alpha2 * q)

        if not (np.all(np.isfinite(v)) and np.all(np.isfinite(u_next)) and np.isfinite(gamma1_next)):
            raise NonFiniteStateError("generalized recursion produced a non-finite iterate", iteration=k)

        states.append(
            GenRecursionState(
                k=k, u=u, p=p, v=v, q=q, gamma1=gamma1, alpha1=alpha1, gamma2=gamma2, alpha2=alpha2
            )
        )
        u, gamma1 = u_next, gamma1_next

    return states


def vamp_recursion_spec(
    instance: ProblemInstance,
    denoiser: DenoiserSpec,
    config: VampConfig,
    initial_r1: Optional[np.ndarray] = None,
) -> GenRecursionSpec:
    """
    The VAMP instance of the generalized recursion

    Uses the same initial r₁₀, γ₁₀ and divergence probe seeds as
    vamp_run(instance, denoiser, config), so the iterates line up.
    """
    x0 = instance.x0
    op = instance.operator
    if config.init_mode == InitMode.CUSTOM:
        if initial_r1 is None:
            raise ConfigError("custom init needs initial_r1")
        r10 = np.asarray(initial_r1, dtype=float)
    elif config.init_mode == InitMode.SE_ORACLE:
        r10 = oracle_initial_r1(x0, config.tau10, config.seed)
    else:
        r10 = np.zeros(instance.n)

    gamma_w = instance.gamma_w
    s = op.s

    def fp(p: np.ndarray, _w: Any, gamma: float, k: int) -> np.ndarray:
        return denoiser.denoise(p + x0, gamma) - x0

    def div_p(p: np.ndarray, _w: Any, gamma: float, k: int) -> float:
        return denoiser.divergence(p + x0, gamma, seed=divergence_seed(config.seed, k)).value

    def fq(q: np.ndarray, xi: np.ndarray, gamma: float, k: int) -> np.ndarray:
        return (gamma_w * s * xi + gamma * q) / (gamma_w * s**2 + gamma)

    def div_q(q: np.ndarray, _xi: Any, gamma: float, k: int) -> float:
        return float(np.mean(gamma / (gamma_w * s**2 + gamma)))

    return GenRecursionSpec(
        fp=fp,
        fq=fq,
        div_p=div_p,
        div_q=div_q,
        gamma1_update=vamp_precision_update,
        gamma2_update=vamp_precision_update,
        c1=vamp_scaling,
        c2=vamp_scaling,
        u0=op.v_adjoint(r10 - x0),
        gamma10=config.initial_gamma(),
        v=op.v,
        wq=instance.projected_noise,
    )


# ---------------------------------------------------------------------------
# Generalized state evolution
# ---------------------------------------------------------------------------


@dataclass
class GenSeState:
    k: int
    tau1: float
    tau2: float
    gbar1: float
    gbar2: float
    abar1: float
    abar2: float

    def to_dict(self) -> Dict[str, Any]:
        return dict(self.__dict__)


@dataclass
class GenSeTrajectory:
    states: List[GenSeState] = field(default_factory=list)
    violation: Optional[str] = None
    violated_at: Optional[int] = None


def general_se_run(
    m_p: SeFunction,
    m_q: SeFunction,
    a_p: SeFunction,
    a_q: SeFunction,
    gamma1_update: PrecisionUpdate,
    gamma2_update: PrecisionUpdate,
    c1: Scaling,
    c2: Scaling,
    tau10: float,
    gbar10: float,
    iterations: int,
) -> GenSeTrajectory:
    """
    SE of the generalized recursion

        ᾱ₁ = A_p(γ̄₁, τ₁),  γ̄₂ = Γ₁(γ̄₁, ᾱ₁),  τ₂ = C₁(ᾱ₁)²·[M_p(γ̄₁, τ₁) − ᾱ₁²τ₁]
        ᾱ₂ = A_q(γ̄₂, τ₂),  γ̄₁' = Γ₂(γ̄₂, ᾱ₂), τ₁' = C₂(ᾱ₂)²·[M_q(γ̄₂, τ₂) − ᾱ₂²τ₂]

    M and A are called as f(γ, τ, k). Truncates like se_run.
    """
    if not tau10 > 0:
        raise InvalidDimensionError(f"tau10 must be positive, got {tau10}")
    trajectory = GenSeTrajectory()
    tau1 = float(tau10)
    gbar1 = max(float(gbar10), settings.gamma_min)

    def stop(k: int, reason: str) -> GenSeTrajectory:
        trajectory.violation, trajectory.violated_at = reason, k
        logger.warning(f"⚠️  generalized SE stopped at k={k}: {reason}")
        return trajectory

    for k in range(iterations):
        abar1 = a_p(gbar1, tau1, k)
        if not sensitivity_in_range(abar1):
            return stop(k, f"abar1={abar1:.6g} outside (0, 1)")
        gbar2 = gamma1_update(gbar1, abar1)
        tau2 = c1(abar1) ** 2 * (m_p(gbar1, tau1, k) - abar1**2 * tau1)
        if not (gbar2 > 0 and tau2 > 0 and np.isfinite(tau2)):
            return stop(k, f"gbar2={gbar2:.6g}, tau2={tau2:.6g} not positive")

        abar2 = a_q(gbar2, tau2, k)
        if not sensitivity_in_range(abar2):
            return stop(k, f"abar2={abar2:.6g} outside (0, 1)")
        gbar1_next = gamma2_update(gbar2, abar2)
        tau1_next = c2(abar2) ** 2 * (m_q(gbar2, tau2, k) - abar2**2 * tau2)

        trajectory.states.append(
            GenSeState(k=k, tau1=tau1, tau2=tau2, gbar1=gbar1, gbar2=gbar2, abar1=abar1, abar2=abar2)
        )
        if not (gbar1_next > 0 and tau1_next > 0 and np.isfinite(tau1_next)):
            return stop(k + 1, f"gbar1={gbar1_next:.6g}, tau1={tau1_next:.6g} not positive")
        tau1, gbar1 = tau1_next, gbar1_next

    return trajectory


def vamp_se_run(
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
) -> GenSeTrajectory:
    """VAMP's SE computed through general_se_run; same arguments and MC streams as se_run"""
    cache: Dict[tuple, tuple] = {}

    def denoiser_pair(gamma: float, tau: float, k: int) -> tuple:
        key = (gamma, tau, k)
        if key not in cache:
            cache[key] = error_and_sensitivity(denoiser, x0, gamma, tau, mc_trials, seed, iteration=k)
        return cache[key]

    return general_se_run(
        m_p=lambda g, t, k: denoiser_pair(g, t, k)[0].value,
        m_q=lambda g, t, k: lmmse_error_E2(g, t, spectrum, gamma_w, gamma_w0),
        a_p=lambda g, t, k: denoiser_pair(g, t, k)[1].value,
        a_q=lambda g, t, k: lmmse_sensitivity_A2(g, spectrum, gamma_w),
        gamma1_update=vamp_precision_update,
        gamma2_update=vamp_precision_update,
        c1=vamp_scaling,
        c2=vamp_scaling,
        tau10=tau10,
        gbar10=gbar10,
        iterations=iterations,
    )
