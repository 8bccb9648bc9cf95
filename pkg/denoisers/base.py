"""
Base class for plug-in denoisers

A denoiser maps a noisy vector r (truth plus Gaussian noise of precision γ)
to an estimate g(r, γ) and reports its normalized divergence ⟨∇g(r, γ)⟩.
Subclasses implement `_apply` and, when a closed form exists,
`_analytic_divergence`.
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass
from enum import Enum
from typing import Any, ClassVar, Dict, Optional

import numpy as np
from loguru import logger

from denoisers.divergence import (
    DivergenceEstimate,
    DivergenceKind,
    monte_carlo_divergence,
)
from utils.exceptions import InvalidDenoiserError, InvalidDimensionError


class DenoiserKind(str, Enum):
    """Registered denoiser families"""

    SOFT_THRESHOLD = "soft-threshold"
    BG_MMSE = "bernoulli-gaussian-mmse"
    GROUP_SOFT_THRESHOLD = "group-soft-threshold"
    FIR_CONVOLUTION = "fir-convolution"
    CNN_STACK = "cnn-stack"
    SVT = "svt"
    LIFTED_RANK_ONE = "lifted-rank-one"
    WAVELET_SOFT_THRESHOLD = "wavelet-soft-threshold"


@dataclass(frozen=True)
class DivergenceMode:
    """Analytic, or Monte Carlo with a probe count and optional fixed step"""

    kind: DivergenceKind = DivergenceKind.ANALYTIC
    probes: int = 0
    epsilon: Optional[float] = None

    @classmethod
    def analytic(cls) -> "DivergenceMode":
        return cls(kind=DivergenceKind.ANALYTIC)

    @classmethod
    def monte_carlo(cls, probes: Optional[int] = None, epsilon: Optional[float] = None) -> "DivergenceMode":
        from config.settings import settings

        return cls(
            kind=DivergenceKind.MONTE_CARLO,
            probes=settings.mc_probes if probes is None else int(probes),
            epsilon=epsilon,
        )


class DenoiserSpec(ABC):
    """
    Immutable denoiser description plus its evaluation map

    Attributes:
        divergence_mode: How `divergence` is computed
    """

    kind: ClassVar[DenoiserKind]
    has_analytic_divergence: ClassVar[bool] = False

    def __init__(self, divergence_mode: Optional[DivergenceMode] = None):
        if divergence_mode is None:
            divergence_mode = (
                DivergenceMode.analytic()
                if self.has_analytic_divergence
                else DivergenceMode.monte_carlo()
            )
        if divergence_mode.kind == DivergenceKind.ANALYTIC and not self.has_analytic_divergence:
            raise InvalidDenoiserError(f"{self.kind.value} has no analytic divergence")
        self.divergence_mode = divergence_mode

    # ------------------------------------------------------------------
    # Subclass hooks
    # ------------------------------------------------------------------

    @abstractmethod
    def _apply(self, r: np.ndarray, gamma: float) -> np.ndarray:
        """Evaluate g(r, γ) on a validated input"""

    def _analytic_divergence(self, r: np.ndarray, gamma: float) -> float:
        raise InvalidDenoiserError(f"{self.kind.value} has no analytic divergence")

    def _check_length(self, n: int) -> None:
        """Raise InvalidDimensionError when n does not fit the parameters"""

    def _check_gamma(self, gamma: float) -> None:
        if not (np.isfinite(gamma) and gamma > 0):
            raise InvalidDenoiserError(f"precision must be positive and finite, got {gamma}")

    def lipschitz_bound(self, gamma: Optional[float] = None) -> float:
        """Declared Lipschitz constant of r ↦ g(r, γ)"""
        return float("inf")

    def params(self) -> Dict[str, Any]:
        return {}

    # ------------------------------------------------------------------
    # Public contract
    # ------------------------------------------------------------------

    def _validated(self, r: np.ndarray, gamma: float) -> np.ndarray:
        r = np.asarray(r, dtype=float)
        if r.ndim != 1:
            raise InvalidDimensionError(f"denoiser input must be a vector, got shape {r.shape}")
        if not np.all(np.isfinite(r)):
            raise InvalidDenoiserError("denoiser input contains non-finite values")
        self._check_length(r.size)
        self._check_gamma(float(gamma))
        return r

    def denoise(self, r: np.ndarray, gamma: float) -> np.ndarray:
        """Return x̂ = g(r, γ), same length as r"""
        r = self._validated(r, gamma)
        return self._apply(r, float(gamma))

    def divergence(
        self,
        r: np.ndarray,
        gamma: float,
        seed: int = 0,
        baseline: Optional[np.ndarray] = None,
    ) -> DivergenceEstimate:
        """
        Normalized Jacobian trace ⟨∇g(r, γ)⟩

        Args:
            r: Evaluation point
            gamma: Precision passed to the denoiser
            seed: Probe seed (Monte Carlo mode only)
            baseline: g(r, γ) if the caller already has it
        """
        r = self._validated(r, gamma)
        gamma = float(gamma)
        mode = self.divergence_mode
        if mode.kind == DivergenceKind.ANALYTIC:
            return DivergenceEstimate(
                value=float(self._analytic_divergence(r, gamma)),
                mode=DivergenceKind.ANALYTIC,
            )

        if mode.probes < 1:
            raise InvalidDenoiserError("Monte Carlo divergence requested with zero probes")
        value, std_error = monte_carlo_divergence(
            lambda v: self._apply(v, gamma),
            r,
            probes=mode.probes,
            seed=seed,
            epsilon=mode.epsilon,
            baseline=baseline,
        )
        logger.trace(f"{self.kind.value} MC divergence {value:.6g} ± {std_error:.2g}")
        return DivergenceEstimate(
            value=value,
            mode=DivergenceKind.MONTE_CARLO,
            probes_used=mode.probes,
            std_error=std_error,
        )

    def with_divergence_mode(self, mode: DivergenceMode) -> "DenoiserSpec":
        """Copy of this denoiser with another divergence strategy"""
        clone = object.__new__(type(self))
        clone.__dict__.update(self.__dict__)
        DenoiserSpec.__init__(clone, mode)
        return clone

    def describe(self) -> Dict[str, Any]:
        return {
            "kind": self.kind.value,
            "divergence": self.divergence_mode.kind.value,
            "probes": self.divergence_mode.probes,
            **self.params(),
        }

    def __repr__(self) -> str:
        inner = ", ".join(f"{k}={v!r}" for k, v in self.params().items())
        return f"{type(self).__name__}({inner})"

