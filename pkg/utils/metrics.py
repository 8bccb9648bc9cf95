"""
Error metrics: MSE, NMSE and PSNR in decibels
"""

import numpy as np

from utils.constants import DB_FLOOR, PIXEL_MAX, PSNR_CEILING
from utils.exceptions import InvalidDimensionError


def to_db(value: float) -> float:
    """10·log10(value), with zero mapped to the DB_FLOOR sentinel"""
    value = float(value)
    if value <= 0.0:
        return DB_FLOOR
    return max(DB_FLOOR, 10.0 * np.log10(value))


def mse(estimate: np.ndarray, truth: np.ndarray) -> float:
    estimate = np.asarray(estimate, dtype=float).ravel()
    truth = np.asarray(truth, dtype=float).ravel()
    if estimate.shape != truth.shape:
        raise InvalidDimensionError(
            f"estimate has {estimate.size} entries, truth has {truth.size}"
        )
    return float(np.mean((estimate - truth) ** 2))


def nmse(estimate: np.ndarray, truth: np.ndarray) -> float:
    """‖estimate − truth‖² / ‖truth‖² (linear scale)"""
    truth = np.asarray(truth, dtype=float).ravel()
    energy = float(np.sum(truth**2))
    if energy == 0.0:
        raise InvalidDimensionError("NMSE undefined for an all-zero truth")
    return mse(estimate, truth) * truth.size / energy


def nmse_db(estimate: np.ndarray, truth: np.ndarray) -> float:
    return to_db(nmse(estimate, truth))


def mse_db(estimate: np.ndarray, truth: np.ndarray) -> float:
    return to_db(mse(estimate, truth))


def clip_to_pixels(x: np.ndarray) -> np.ndarray:
    return np.clip(np.asarray(x, dtype=float), 0.0, PIXEL_MAX)


def psnr(estimate: np.ndarray, truth: np.ndarray) -> float:
    """
    PSNR for images held in [0, 255]

    The estimate is clipped to the pixel range first. A perfect
    reconstruction reports PSNR_CEILING instead of +inf.
    """
    err = mse(clip_to_pixels(estimate), truth)
    if err == 0.0:
        return PSNR_CEILING
    return min(PSNR_CEILING, 10.0 * np.log10(PIXEL_MAX**2 / err))
