"""
Bilinear problems written as lifted linear problems

    y = Σ_l b_l·Φ_l·c + w = [Φ₁ ⋯ Φ_L]·vec(c·bᵀ) + w

with x = vec(c·bᵀ) = kron(b, c) of length L·P.
"""

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Sequence

import numpy as np
import scipy.linalg
from loguru import logger

from denoisers.base import DivergenceMode
from denoisers.lifted import LiftedRankOne
from operators.hadamard import is_power_of_two
from operators.spectral import (
    SpectralOperator,
    build_operator,
    dense_matrix,
    geometric_spectrum,
    operator_from_matrix,
)
from solvers.problem import ProblemInstance, gamma_w0_for_snr, make_instance
from utils.constants import LIFTED_INNER_ITERS
from utils.exceptions import InvalidDimensionError
from utils.rng import derive_seed, make_rng

# seed streams under an instance seed
B_STREAM = 0
C_STREAM = 1
BLOCK_STREAM = 2
NOISE_STREAM = 3
COLUMN_STREAM = 4


class OperatorStyle(str, Enum):
    IID_GAUSSIAN = "iid-gaussian"
    HAAR_GEOMETRIC = "haar-geometric"


@dataclass(frozen=True)
class LiftedInstance:
    """
    Attributes:
        phis: Blocks Φ_l stacked as an (L, M, P) array
        b0: Truth b (L)
        c0: Truth c (P), K-sparse
        problem: The lifted linear problem; its x0 is kron(b0, c0)
        clamp: Entries of b known to the estimator
        snr_db: Measurement SNR (inf for noiseless)
    """

    phis: np.ndarray
    b0: np.ndarray
    c0: np.ndarray
    problem: ProblemInstance
    clamp: Dict[int, float] = field(default_factory=dict)
    snr_db: float = math.inf

    @property
    def subspace_dim(self) -> int:
        return int(self.phis.shape[0])

    @property
    def factor_len(self) -> int:
        return int(self.phis.shape[2])

    @property
    def m(self) -> int:
        return int(self.phis.shape[1])

    @property
    def sparsity(self) -> int:
        return int(np.count_nonzero(self.c0))

    @property
    def x0(self) -> np.ndarray:
        return self.problem.x0

    @property
    def operator(self) -> SpectralOperator:
        return self.problem.operator

    def bilinear(self, b: np.ndarray, c: np.ndarray) -> np.ndarray:
        """Σ_l b_l·Φ_l·c evaluated directly"""
        return np.einsum("l,lmp,p->m", b, self.phis, c)


def build_lifted_operator(phis: Sequence[np.ndarray]) -> SpectralOperator:
    """A = [Φ₁ Φ₂ ⋯ Φ_L], with its SVD computed once"""
    blocks = [np.asarray(phi, dtype=float) for phi in phis]
    if not blocks:
        raise InvalidDimensionError("need at least one block")
    shape = blocks[0].shape
    if any(b.ndim != 2 or b.shape != shape for b in blocks):
        raise InvalidDimensionError(f"all blocks must share shape {shape}")
    return operator_from_matrix(np.hstack(blocks))


def _sparse_vector(length: int, sparsity: int, rng: np.random.Generator) -> np.ndarray:
    c = np.zeros(length)
    support = rng.choice(length, size=sparsity, replace=False)
    c[support] = rng.standard_normal(sparsity)
    return c


def _assemble(
    phis: np.ndarray,
    b0: np.ndarray,
    c0: np.ndarray,
    snr_db: float,
    seed: int,
    clamp: Optional[Dict[int, float]] = None,
) -> LiftedInstance:
    operator = build_lifted_operator(list(phis))
    x0 = np.kron(b0, c0)
    gamma_w0 = gamma_w0_for_snr(operator, x0, snr_db)
    problem = make_instance(x0, operator, gamma_w0, seed=derive_seed(seed, NOISE_STREAM))
    instance = LiftedInstance(phis=phis, b0=b0, c0=c0, problem=problem, clamp=dict(clamp or {}), snr_db=snr_db)

    lifted = operator.forward(x0)
    direct = instance.bilinear(b0, c0)
    scale = max(1.0, float(np.max(np.abs(direct))))
    if not np.allclose(lifted, direct, rtol=0.0, atol=1e-9 * scale):
        raise InvalidDimensionError("lifting identity A·vec(c·bᵀ) = Σ b_l·Φ_l·c violated")
    return instance


def make_csmu_instance(
    subspace_dim: int,
    factor_len: int,
    sparsity: int,
    m: int,
    b1_known: float,
    operator_style: OperatorStyle = OperatorStyle.IID_GAUSSIAN,
    cond: float = 1.0,
    snr_db: float = 40.0,
    seed: int = 0,
) -> LiftedInstance:
    """
    Compressed sensing with matrix uncertainty

    b₁ is fixed to `b1_known` and revealed through the clamp; b₂..b_L are
    i.i.d. N(0, 1) and c is K-sparse with N(0, 1) nonzeros.
    """
    big_l, p, k = int(subspace_dim), int(factor_len), int(sparsity)
    if big_l < 1 or p < 1 or m < 1:
        raise InvalidDimensionError(f"dimensions must be positive, got L={big_l}, P={p}, M={m}")
    if not 0 < k <= p:
        raise InvalidDimensionError(f"sparsity must lie in 1..{p}, got {k}")
    if m > big_l * p:
        raise InvalidDimensionError(f"M={m} exceeds L·P={big_l * p}")

    b0 = np.empty(big_l)
    b0[0] = float(b1_known)
    b0[1:] = make_rng(derive_seed(seed, B_STREAM)).standard_normal(big_l - 1)
    c0 = _sparse_vector(p, k, make_rng(derive_seed(seed, C_STREAM)))

    style = OperatorStyle(operator_style)
    if style == OperatorStyle.IID_GAUSSIAN:
        phis = make_rng(derive_seed(seed, BLOCK_STREAM)).standard_normal((big_l, m, p)) / np.sqrt(m)
    else:
        block_seed = derive_seed(seed, BLOCK_STREAM)
        a = dense_matrix(
            build_operator(
                geometric_spectrum(m, big_l * p, cond),
                u_seed=derive_seed(block_seed, 0),
                v_seed=derive_seed(block_seed, 1),
            )
        )
        phis = np.stack(np.hsplit(a, big_l))

    logger.debug(f"CSMU instance L={big_l} P={p} K={k} M={m} style={style.value} seed={seed}")
    return _assemble(phis, b0, c0, snr_db, seed, clamp={0: float(b1_known)})


def make_selfcal_instance(
    subspace_dim: int,
    factor_len: int,
    sparsity: int,
    m: int,
    seed: int = 0,
    hadamard_columns: Optional[List[int]] = None,
) -> LiftedInstance:
    """
    Self-calibration y = Diag(H·b)·Ψ·c with noiseless measurements

    H holds L columns of the M×M Hadamard matrix (random unless
    `hadamard_columns` is given), so Φ_l = Diag(h_l)·Ψ.
    """
    big_l, p, k = int(subspace_dim), int(factor_len), int(sparsity)
    if not is_power_of_two(m):
        raise InvalidDimensionError(f"M must be a power of two for the Hadamard gains, got {m}")
    if not 1 <= big_l <= m:
        raise InvalidDimensionError(f"L must lie in 1..{m}, got {big_l}")
    if not 0 < k <= p:
        raise InvalidDimensionError(f"sparsity must lie in 1..{p}, got {k}")

    if hadamard_columns is None:
        columns = make_rng(derive_seed(seed, COLUMN_STREAM)).choice(m, size=big_l, replace=False)
    else:
        columns = np.asarray(hadamard_columns, dtype=int)
        if columns.shape != (big_l,) or np.any(columns < 0) or np.any(columns >= m):
            raise InvalidDimensionError(f"need {big_l} Hadamard column indices in 0..{m - 1}")
    h = scipy.linalg.hadamard(m).astype(float)[:, columns]

    psi = make_rng(derive_seed(seed, BLOCK_STREAM)).standard_normal((m, p))
    phis = np.stack([h[:, l, None] * psi for l in range(big_l)])
    b0 = make_rng(derive_seed(seed, B_STREAM)).standard_normal(big_l)
    c0 = _sparse_vector(p, k, make_rng(derive_seed(seed, C_STREAM)))

    logger.debug(f"Self-calibration instance L={big_l} P={p} K={k} M={m} seed={seed}")
    return _assemble(phis, b0, c0, math.inf, seed)


def lifted_denoiser(
    instance: LiftedInstance,
    inner_iters: int = LIFTED_INNER_ITERS,
    divergence_mode: Optional[DivergenceMode] = None,
) -> LiftedRankOne:
    """Rank-one denoiser matched to the instance's dimensions, sparsity and clamp"""
    rho = min(max(instance.sparsity / instance.factor_len, 1e-3), 1 - 1e-3)
    return LiftedRankOne(
        subspace_dim=instance.subspace_dim,
        factor_len=instance.factor_len,
        rho=rho,
        inner_iters=inner_iters,
        clamp=instance.clamp,
        divergence_mode=divergence_mode or DivergenceMode.monte_carlo(),
    )
