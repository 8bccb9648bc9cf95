"""
Closed-form error and sensitivity functions of the LMMSE stage

Both are averages over the N zero-padded singular values, so they depend
on the operator only through its spectrum.
"""

import math

import numpy as np

from operators.spectral import Spectrum
from utils.exceptions import InvalidDimensionError


def lmmse_error_E2(
    gamma2: float,
    tau2: float,
    spectrum: Spectrum,
    gamma_w: float,
    gamma_w0: float,
) -> float:
    """
    E₂(γ₂, τ₂) = (1/N)·Σ (γ_w²·s²/γ_w0 + γ₂²·τ₂) / (γ_w·s² + γ₂)²

    gamma_w0 = inf (noiseless truth) drops the noise term.
    """
    if not (gamma2 > 0 and tau2 > 0):
        raise InvalidDimensionError(f"E2 needs gamma2, tau2 > 0, got {gamma2}, {tau2}")
    s2 = spectrum.values**2
    noise_term = 0.0 if math.isinf(gamma_w0) else gamma_w**2 * s2 / gamma_w0
    denom = gamma_w * s2 + gamma2
    return float(np.mean((noise_term + gamma2**2 * tau2) / denom**2))


def lmmse_sensitivity_A2(gamma2: float, spectrum: Spectrum, gamma_w: float) -> float:
    """A₂(γ₂) = (1/N)·Σ γ₂ / (γ_w·s² + γ₂), always in (0, 1]"""
    if not gamma2 > 0:
        raise InvalidDimensionError(f"A2 needs gamma2 > 0, got {gamma2}")
    return float(np.mean(gamma2 / (gamma_w * spectrum.values**2 + gamma2)))
