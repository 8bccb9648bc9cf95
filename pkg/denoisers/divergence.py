"""
Divergence estimators for black-box maps

The normalized divergence ⟨∇g(r)⟩ = (1/N)·Σ ∂g_n/∂r_n drives the extrinsic
corrections in VAMP and the Onsager term in AMP.
"""

from dataclasses import asdict, dataclass
from enum import Enum
from typing import Any, Callable, Dict, Optional, Tuple

import numpy as np

from utils.exceptions import InvalidDenoiserError
from utils.rng import make_rng

VectorMap = Callable[[np.ndarray], np.ndarray]


class DivergenceKind(str, Enum):
    ANALYTIC = "analytic"
    MONTE_CARLO = "monte-carlo"


@dataclass(frozen=True)
class DivergenceEstimate:
    """A divergence value and how it was obtained"""

    value: float
    mode: DivergenceKind
    probes_used: int = 0
    std_error: Optional[float] = None

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data["mode"] = self.mode.value
        return data


def default_epsilon(r: np.ndarray, base: Optional[float] = None) -> float:
    """Finite-difference step base·max(1, ‖r‖/√N); base defaults to PNPVAMP_MC_EPSILON"""
    if base is None:
        from config.settings import settings

        base = settings.mc_epsilon
    r = np.asarray(r, dtype=float)
    return base * max(1.0, float(np.linalg.norm(r)) / np.sqrt(r.size))


def monte_carlo_divergence(
    fn: VectorMap,
    r: np.ndarray,
    probes: int,
    seed: int,
    epsilon: Optional[float] = None,
    baseline: Optional[np.ndarray] = None,
) -> Tuple[float, float]:
    """
    Randomized finite-difference divergence

    (1/(N·K))·Σ_k η_kᵀ[g(r + ε·η_k) − g(r)]/ε with η_k i.i.d. N(0, I).

    Args:
        fn: The map g
        r: Evaluation point
        probes: Number of Gaussian probes K
        seed: Probe seed
        epsilon: Step; defaults to default_epsilon(r)
        baseline: g(r) if already computed

    Returns:
        (estimate, standard error across probes)
    """
    if probes < 1:
        raise InvalidDenoiserError(f"Monte Carlo divergence needs at least one probe, got {probes}")
    r = np.asarray(r, dtype=float)
    n = r.size
    eps = default_epsilon(r) if epsilon is None else float(epsilon)
    if eps <= 0:
        raise InvalidDenoiserError(f"finite-difference step must be positive, got {eps}")

    g0 = fn(r) if baseline is None else baseline
    rng = make_rng(seed)
    samples = np.empty(probes)
    for k in range(probes):
        eta = rng.standard_normal(n)
        samples[k] = float(eta @ (fn(r + eps * eta) - g0)) / (eps * n)

    value = float(np.mean(samples))
    std_error = float(np.std(samples, ddof=1) / np.sqrt(probes)) if probes > 1 else 0.0
    return value, std_error


def finite_difference_divergence(fn: VectorMap, r: np.ndarray, step: float = 1e-6) -> float:
    """Exact-trace divergence by central differences, one coordinate at a time"""
    r = np.asarray(r, dtype=float)
    n = r.size
    total = 0.0
    for i in range(n):
        bumped = r.copy()
        bumped[i] += step
        plus = fn(bumped)[i]
        bumped[i] -= 2 * step
        minus = fn(bumped)[i]
        total += (plus - minus) / (2 * step)
    return total / n
