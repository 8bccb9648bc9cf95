"""
Oracle factor estimates for lifted problems

Each oracle is handed one true factor, which turns the bilinear model into a
linear one in the other factor.
"""

import math
from typing import Tuple

import numpy as np

from lifting.instances import LiftedInstance
from utils.metrics import nmse_db


def _posterior_mean(design: np.ndarray, y: np.ndarray, gamma_w: float, prior_var: float) -> np.ndarray:
    """Mean of x ~ N(0, prior_var·I) given y = design·x + N(0, I/gamma_w)"""
    gram = gamma_w * design.T @ design + np.eye(design.shape[1]) / prior_var
    return np.linalg.solve(gram, gamma_w * design.T @ y)


def _solve(design: np.ndarray, y: np.ndarray, instance: LiftedInstance, prior_var: float) -> np.ndarray:
    if math.isinf(instance.problem.gamma_w0):
        return np.linalg.lstsq(design, y, rcond=None)[0]
    return _posterior_mean(design, y, instance.problem.gamma_w, prior_var)


def oracle_b_estimate(instance: LiftedInstance, sigma_b2: float = 1.0) -> np.ndarray:
    """
    b̂ given c⁰: y = [Φ₁c⁰ ⋯ Φ_Lc⁰]·b + w with a N(0, σ_b²) prior on the
    unknown entries; clamped entries keep their known values.
    """
    y = instance.problem.y
    design = np.einsum("lmp,p->ml", instance.phis, instance.c0)
    b = np.zeros(instance.subspace_dim)
    known = sorted(instance.clamp)
    for index in known:
        b[index] = instance.clamp[index]
    free = [l for l in range(instance.subspace_dim) if l not in instance.clamp]
    if free:
        residual = y - design[:, known] @ b[known]
        b[free] = _solve(design[:, free], residual, instance, sigma_b2)
    return b


def oracle_c_estimate(instance: LiftedInstance, sigma_c2: float = 1.0) -> np.ndarray:
    """ĉ given b⁰ and supp(c⁰): linear estimate on the support, zero elsewhere"""
    y = instance.problem.y
    mixed = np.einsum("l,lmp->mp", instance.b0, instance.phis)
    support = np.flatnonzero(instance.c0)
    c = np.zeros(instance.factor_len)
    c[support] = _solve(mixed[:, support], y, instance, sigma_c2)
    return c


def oracle_nmse_db(instance: LiftedInstance) -> Tuple[float, float]:
    """(NMSE(b) oracle, NMSE(c) oracle) in dB"""
    return (
        nmse_db(oracle_b_estimate(instance), instance.b0),
        nmse_db(oracle_c_estimate(instance), instance.c0),
    )
