"""
Group soft-threshold (group-LASSO proximal map)

The N-vector is read as L rows of K entries, row ℓ = r[ℓK:(ℓ+1)K], and
each row is shrunk toward zero as a block.
"""

from typing import Any, Dict, Optional

import numpy as np

from denoisers.base import DenoiserKind, DenoiserSpec, DivergenceMode
from denoisers.separable import _ThresholdMixin
from utils.exceptions import InvalidDenoiserError, InvalidDimensionError


def group_soft_threshold(r: np.ndarray, group_size: int, theta: float) -> np.ndarray:
    """Row ℓ ↦ r_ℓ·max(0, 1 − θ/‖r_ℓ‖₂)"""
    r = np.asarray(r, dtype=float)
    if group_size < 1 or r.size % group_size:
        raise InvalidDimensionError(f"group size {group_size} does not divide length {r.size}")
    rows = r.reshape(-1, group_size)
    norms = np.linalg.norm(rows, axis=1)
    with np.errstate(divide="ignore", invalid="ignore"):
        shrink = np.where(norms > theta, 1.0 - theta / norms, 0.0)
    return (rows * shrink[:, None]).ravel()


class GroupSoftThreshold(_ThresholdMixin, DenoiserSpec):
    kind = DenoiserKind.GROUP_SOFT_THRESHOLD
    has_analytic_divergence = True

    def __init__(
        self,
        group_size: int,
        threshold: Optional[float] = None,
        threshold_scale: Optional[float] = None,
        divergence_mode: Optional[DivergenceMode] = None,
    ):
        if int(group_size) < 1:
            raise InvalidDenoiserError(f"group size must be positive, got {group_size}")
        self.group_size = int(group_size)
        self._init_threshold(threshold, threshold_scale)
        super().__init__(divergence_mode)

    def _check_length(self, n: int) -> None:
        if n % self.group_size:
            raise InvalidDimensionError(f"group size {self.group_size} does not divide length {n}")

    def _apply(self, r: np.ndarray, gamma: float) -> np.ndarray:
        return group_soft_threshold(r, self.group_size, self.theta(gamma))

    def _analytic_divergence(self, r: np.ndarray, gamma: float) -> float:
        theta = self.theta(gamma)
        k = self.group_size
        norms = np.linalg.norm(r.reshape(-1, k), axis=1)
        active = norms[norms > theta]
        return float(np.sum(k - theta * (k - 1) / active)) / r.size

    def lipschitz_bound(self, gamma: Optional[float] = None) -> float:
        return 1.0

    def params(self) -> Dict[str, Any]:
        return {"group_size": self.group_size, **self._threshold_params()}
