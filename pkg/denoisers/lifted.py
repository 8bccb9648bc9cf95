"""
Rank-one denoiser for lifted bilinear problems

r is read as a noisy vec(c·bᵀ) (column-stacked, P×L). The factors are
estimated by alternating conditional posterior means:

    b_l | ĉ   scalar Gaussian posterior from the P entries of column l
    c_p | b̂   Bernoulli-Gaussian posterior from the L entries of row p

starting from the leading singular pair of the reshaped r, rebalanced
to equal norms. Entries of b listed in `clamp` are pinned after every
b-update.
"""

from typing import Any, Dict, Mapping, Optional, Tuple

import numpy as np

from denoisers.base import DenoiserKind, DenoiserSpec, DivergenceMode
from denoisers.separable import bg_mmse_scalar
from utils.constants import LIFTED_INNER_ITERS
from utils.exceptions import InvalidDenoiserError, InvalidDimensionError

FactorPair = Tuple[np.ndarray, np.ndarray]


def _balance(b: np.ndarray, c: np.ndarray) -> FactorPair:
    nb, nc = np.linalg.norm(b), np.linalg.norm(c)
    if nb == 0.0 or nc == 0.0:
        return np.zeros_like(b), np.zeros_like(c)
    scale = np.sqrt(nc / nb)
    return b * scale, c / scale


class LiftedRankOne(DenoiserSpec):
    kind = DenoiserKind.LIFTED_RANK_ONE
    has_analytic_divergence = False

    def __init__(
        self,
        subspace_dim: int,
        factor_len: int,
        rho: float,
        sigma_c2: float = 1.0,
        sigma_b2: float = 1.0,
        inner_iters: int = LIFTED_INNER_ITERS,
        clamp: Optional[Mapping[int, float]] = None,
        divergence_mode: Optional[DivergenceMode] = None,
    ):
        if int(subspace_dim) < 1 or int(factor_len) < 1:
            raise InvalidDenoiserError(f"lifting dims must be positive, got L={subspace_dim}, P={factor_len}")
        if int(inner_iters) < 1:
            raise InvalidDenoiserError(f"inner_iters must be at least 1, got {inner_iters}")
        if not 0 < rho < 1:
            raise InvalidDenoiserError(f"sparsity must lie in (0, 1), got {rho}")
        if not (sigma_c2 > 0 and sigma_b2 > 0):
            raise InvalidDenoiserError("factor prior variances must be positive")
        self.subspace_dim = int(subspace_dim)
        self.factor_len = int(factor_len)
        self.rho = float(rho)
        self.sigma_c2 = float(sigma_c2)
        self.sigma_b2 = float(sigma_b2)
        self.inner_iters = int(inner_iters)
        self.clamp = {int(k): float(v) for k, v in (clamp or {}).items()}
        for index in self.clamp:
            if not 0 <= index < self.subspace_dim:
                raise InvalidDenoiserError(f"clamp index {index} outside 0..{self.subspace_dim - 1}")
        super().__init__(divergence_mode)

    def _check_length(self, n: int) -> None:
        if n != self.subspace_dim * self.factor_len:
            raise InvalidDimensionError(
                f"cannot reshape {n} entries to P×L = {self.factor_len}×{self.subspace_dim}"
            )

    def as_matrix(self, r: np.ndarray) -> np.ndarray:
        """P×L matrix whose column l is r[lP:(l+1)P]"""
        return np.asarray(r, dtype=float).reshape(self.subspace_dim, self.factor_len).T

    def _initial_pair(self, matrix: np.ndarray) -> FactorPair:
        u, sigma, vt = np.linalg.svd(matrix, full_matrices=False)
        root = np.sqrt(sigma[0])
        return vt[0] * root, u[:, 0] * root

    def _pin(self, b: np.ndarray) -> np.ndarray:
        for index, value in self.clamp.items():
            b[index] = value
        return b

    def factorize(
        self,
        r: np.ndarray,
        gamma: float,
        initial_pair: Optional[FactorPair] = None,
    ) -> FactorPair:
        """
        Estimate (b̂, ĉ) from r

        Args:
            r: Noisy lifted vector of length L·P
            gamma: Noise precision of r
            initial_pair: Optional (b, c) start; the leading singular pair otherwise
        """
        r = self._validated(r, gamma)
        return self._factorize(r, float(gamma), initial_pair)

    def _factorize(self, r: np.ndarray, gamma: float, initial_pair: Optional[FactorPair]) -> FactorPair:
        matrix = self.as_matrix(r)
        if initial_pair is None:
            b, c = self._initial_pair(matrix)
        else:
            b = np.asarray(initial_pair[0], dtype=float).copy()
            c = np.asarray(initial_pair[1], dtype=float).copy()
            if b.shape != (self.subspace_dim,) or c.shape != (self.factor_len,):
                raise InvalidDimensionError("initial pair does not match (L, P)")
        b, c = _balance(b, c)

        for _ in range(self.inner_iters):
            c_energy = float(c @ c)
            b = (gamma * (matrix.T @ c)) / (gamma * c_energy + 1.0 / self.sigma_b2)
            b = self._pin(b)

            b_energy = float(b @ b)
            if b_energy == 0.0:
                c = np.zeros(self.factor_len)
                continue
            pseudo = (matrix @ b) / b_energy
            c, _ = bg_mmse_scalar(pseudo, gamma * b_energy, self.rho, self.sigma_c2)
        return b, c

    def _apply(self, r: np.ndarray, gamma: float) -> np.ndarray:
        b, c = self._factorize(r, gamma, None)
        return np.kron(b, c)

    def params(self) -> Dict[str, Any]:
        return {
            "subspace_dim": self.subspace_dim,
            "factor_len": self.factor_len,
            "rho": self.rho,
            "sigma_c2": self.sigma_c2,
            "sigma_b2": self.sigma_b2,
            "inner_iters": self.inner_iters,
            "clamp": {str(k): v for k, v in self.clamp.items()},
        }
