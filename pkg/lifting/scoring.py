"""
Scoring of lifted recoveries

Factors are read from the leading singular pair of the P×L estimate and
aligned to the truth by least squares, which removes the (b, c) → (a·b, c/a)
ambiguity before the factor NMSEs are taken.
"""

from dataclasses import dataclass
from typing import Any, Dict, Tuple

import numpy as np

from lifting.instances import LiftedInstance
from utils.constants import LIFT_SUCCESS_DB
from utils.exceptions import InvalidDimensionError
from utils.metrics import nmse_db

LIFT_COLUMNS = ("nmse_b_db", "nmse_c_db", "nmse_outer_db", "success")


@dataclass(frozen=True)
class RecoveryScore:
    nmse_b_db: float
    nmse_c_db: float
    nmse_outer_db: float
    success: bool

    def to_row(self) -> Dict[str, Any]:
        return {
            "nmse_b_db": self.nmse_b_db,
            "nmse_c_db": self.nmse_c_db,
            "nmse_outer_db": self.nmse_outer_db,
            "success": self.success,
        }


def leading_pair(xhat: np.ndarray, subspace_dim: int, factor_len: int) -> Tuple[float, np.ndarray, np.ndarray]:
    """(σ, u, w) with σ·u·wᵀ the best rank-one approximation of the P×L estimate"""
    matrix = np.asarray(xhat, dtype=float).reshape(subspace_dim, factor_len).T
    u, sigma, vt = np.linalg.svd(matrix, full_matrices=False)
    return float(sigma[0]), u[:, 0], vt[0]


def score_recovery(xhat: np.ndarray, instance: LiftedInstance) -> RecoveryScore:
    big_l, p = instance.subspace_dim, instance.factor_len
    xhat = np.asarray(xhat, dtype=float)
    if xhat.shape != (big_l * p,):
        raise InvalidDimensionError(f"estimate must have length L·P = {big_l * p}, got shape {xhat.shape}")
    b0, c0 = instance.b0, instance.c0
    if not (np.any(b0) and np.any(c0)):
        raise InvalidDimensionError("truth factors must be nonzero")

    sigma, u, w = leading_pair(xhat, big_l, p)
    b_hat = float(w @ b0) * w
    c_hat = float(u @ c0) * u
    outer = sigma * np.outer(u, w)
    truth = np.outer(c0, b0)

    outer_db = nmse_db(outer, truth)
    return RecoveryScore(
        nmse_b_db=nmse_db(b_hat, b0),
        nmse_c_db=nmse_db(c_hat, c0),
        nmse_outer_db=outer_db,
        success=bool(outer_db < LIFT_SUCCESS_DB),
    )
