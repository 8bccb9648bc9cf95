"""
Fast structured operator A = J·P·H·D

D: random ±1 diagonal, H: orthonormal Walsh–Hadamard transform in natural
(Sylvester) order, P: random permutation, J: keep the first M rows.
Everything runs in O(N log N) without forming a matrix.
"""

from typing import Optional

import numpy as np
from loguru import logger

from operators.spectral import OperatorKind, OrthogonalMap, SpectralOperator, Spectrum
from utils.exceptions import InvalidDimensionError, InvalidSpectrumError
from utils.rng import make_rng


def is_power_of_two(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


def fwht(x: np.ndarray) -> np.ndarray:
    """
    Orthonormal fast Walsh–Hadamard transform

    Matches scipy.linalg.hadamard(n) @ x / sqrt(n). The transform is its
    own inverse.
    """
    x = np.asarray(x, dtype=float)
    n = x.shape[0]
    if x.ndim != 1 or not is_power_of_two(n):
        raise InvalidDimensionError(f"Walsh–Hadamard length must be a power of two, got {x.shape}")
    y = x.copy()
    h = 1
    while h < n:
        blocks = y.reshape(n // (2 * h), 2, h)
        a = blocks[:, 0, :]
        b = blocks[:, 1, :]
        y = np.stack((a + b, a - b), axis=1).reshape(n)
        h *= 2
    return y / np.sqrt(n)


def fast_jphd_operator(
    n: int, m: int, seed: int, spectrum: Optional[Spectrum] = None
) -> SpectralOperator:
    """
    Subsampled randomized Hadamard operator

    Args:
        n: Signal length, a power of two
        m: Number of kept rows, m ≤ n
        seed: Seed for the sign flips and the permutation
        spectrum: Optional singular values giving A = J·diag(s)·P·H·D;
            without it the rows are orthonormal (A·Aᵀ = I)

    Returns:
        SpectralOperator with U = I_M and Vᵀ = P·H·D
    """
    if not is_power_of_two(n):
        raise InvalidDimensionError(f"fast-jphd needs a power-of-two length, got {n}")
    if not 1 <= m <= n:
        raise InvalidDimensionError(f"need 1 ≤ m ≤ n, got m={m}, n={n}")

    rng = make_rng(seed)
    signs = rng.choice(np.array([-1.0, 1.0]), size=n)
    perm = rng.permutation(n)

    if spectrum is None:
        s = np.zeros(n)
        s[:m] = 1.0
    else:
        if spectrum.n != n or spectrum.m != m:
            raise InvalidSpectrumError(
                f"spectrum is {spectrum.m}×{spectrum.n}, operator is {m}×{n}"
            )
        s = spectrum.values

    def v_adjoint(x: np.ndarray) -> np.ndarray:
        return fwht(signs * x)[perm]

    def v_apply(z: np.ndarray) -> np.ndarray:
        unpermuted = np.empty(n)
        unpermuted[perm] = z
        return signs * fwht(unpermuted)

    logger.debug(f"Built fast-jphd operator {m}×{n}")
    return SpectralOperator(
        m=m,
        n=n,
        s=s,
        u=OrthogonalMap.identity(m),
        v=OrthogonalMap(dim=n, forward_fn=v_apply, adjoint_fn=v_adjoint),
        kind=OperatorKind.FAST_JPHD,
    )
