"""
LMMSE half of VAMP via the cached SVD

x̂₂ = (γ_w·AᵀA + γ₂I)⁻¹(γ_w·Aᵀy + γ₂r₂). In the V basis the system is
diagonal with entries γ_w·s_i² + γ₂, so one call costs two applications
of V plus O(N).
"""

from typing import Tuple

import numpy as np

from solvers.problem import ProblemInstance
from utils.exceptions import InvalidDimensionError


def lmmse_estimate(r2: np.ndarray, gamma2: float, instance: ProblemInstance) -> Tuple[np.ndarray, float]:
    """
    Args:
        r2: LMMSE input (N)
        gamma2: Its precision, > 0
        instance: Problem with cached SVD data

    Returns:
        (x̂₂, α₂) with α₂ the normalized Jacobian trace of r₂ ↦ x̂₂
    """
    if not gamma2 > 0:
        raise InvalidDimensionError(f"LMMSE precision must be positive, got {gamma2}")
    r2 = np.asarray(r2, dtype=float)
    op = instance.operator
    if r2.shape != (op.n,):
        raise InvalidDimensionError(f"r2 must have length {op.n}, got shape {r2.shape}")

    denom = instance.gamma_w * op.s**2 + gamma2
    rotated = (instance.gamma_w * instance.projected_measurements + gamma2 * op.v_adjoint(r2)) / denom
    xhat2 = op.v_apply(rotated)
    alpha2 = float(np.mean(gamma2 / denom))
    return xhat2, alpha2
