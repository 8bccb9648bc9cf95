"""
Measurement operators in SVD form

A = U·diag(s)·Vᵀ with U (M×M) and V (N×N) orthogonal and s an N-vector of
singular values, zero-padded beyond min(M, N). The factors are stored as
OrthogonalMap objects so dense and fast (matrix-free) operators share one
interface.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Callable, Optional

import numpy as np
import scipy.linalg
from loguru import logger

from utils.exceptions import InvalidDimensionError, InvalidSpectrumError
from utils.rng import make_rng


class OperatorKind(str, Enum):
    """How the orthogonal factors are represented"""

    DENSE_HAAR = "dense-haar"
    FAST_JPHD = "fast-jphd"
    CUSTOM = "custom"


def _as_vector(x: np.ndarray, dim: int, name: str) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or x.shape[0] != dim:
        raise InvalidDimensionError(f"{name} expects a vector of length {dim}, got shape {x.shape}")
    return x


@dataclass(frozen=True)
class OrthogonalMap:
    """An n×n orthogonal map with its adjoint (transpose)"""

    dim: int
    forward_fn: Callable[[np.ndarray], np.ndarray]
    adjoint_fn: Callable[[np.ndarray], np.ndarray]
    matrix: Optional[np.ndarray] = None

    def apply(self, x: np.ndarray) -> np.ndarray:
        return self.forward_fn(_as_vector(x, self.dim, "orthogonal map"))

    def adjoint(self, x: np.ndarray) -> np.ndarray:
        return self.adjoint_fn(_as_vector(x, self.dim, "orthogonal map adjoint"))

    def compose(self, inner: "OrthogonalMap") -> "OrthogonalMap":
        """Return self ∘ inner"""
        if inner.dim != self.dim:
            raise InvalidDimensionError(f"cannot compose maps of size {self.dim} and {inner.dim}")
        matrix = None
        if self.matrix is not None and inner.matrix is not None:
            matrix = self.matrix @ inner.matrix
        return OrthogonalMap(
            dim=self.dim,
            forward_fn=lambda x: self.forward_fn(inner.forward_fn(x)),
            adjoint_fn=lambda x: inner.adjoint_fn(self.adjoint_fn(x)),
            matrix=matrix,
        )

    def to_matrix(self) -> np.ndarray:
        if self.matrix is not None:
            return self.matrix
        eye = np.eye(self.dim)
        return np.column_stack([self.forward_fn(eye[:, i]) for i in range(self.dim)])

    @classmethod
    def from_matrix(cls, q: np.ndarray) -> "OrthogonalMap":
        q = np.asarray(q, dtype=float)
        if q.ndim != 2 or q.shape[0] != q.shape[1]:
            raise InvalidDimensionError(f"orthogonal matrix must be square, got {q.shape}")
        return cls(dim=q.shape[0], forward_fn=lambda x: q @ x, adjoint_fn=lambda x: q.T @ x, matrix=q)

    @classmethod
    def identity(cls, n: int) -> "OrthogonalMap":
        return cls(dim=n, forward_fn=lambda x: x.copy(), adjoint_fn=lambda x: x.copy(), matrix=np.eye(n))


def orthogonality_defect(q: OrthogonalMap, probes: int = 8, seed: int = 0) -> float:
    """Largest relative deviation of ‖Qx‖/‖x‖ and QᵀQx from x on random probes"""
    rng = make_rng(seed)
    worst = 0.0
    for _ in range(probes):
        x = rng.standard_normal(q.dim)
        norm = np.linalg.norm(x)
        worst = max(worst, abs(np.linalg.norm(q.apply(x)) - norm) / norm)
        worst = max(worst, np.linalg.norm(q.adjoint(q.apply(x)) - x) / norm)
    return float(worst)


@dataclass(frozen=True)
class Spectrum:
    """N singular values, non-increasing, with M leading entries possibly nonzero"""

    values: np.ndarray
    m: int

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", values)
        if values.ndim != 1 or values.size == 0:
            raise InvalidSpectrumError("spectrum must be a non-empty vector")
        if np.any(values < 0) or not np.all(np.isfinite(values)):
            raise InvalidSpectrumError("singular values must be finite and non-negative")
        if np.any(np.diff(values) > 1e-12 * max(1.0, values[0])):
            raise InvalidSpectrumError("singular values must be sorted non-increasing")
        if not 1 <= self.m:
            raise InvalidDimensionError(f"row count must be positive, got {self.m}")
        if np.any(values[min(self.m, values.size):] != 0):
            raise InvalidSpectrumError("entries beyond the row count must be zero")

    @property
    def n(self) -> int:
        return int(self.values.size)

    @property
    def cond(self) -> float:
        """s₁ / s_M, infinite when s_M is zero"""
        last = self.values[min(self.m, self.n) - 1]
        return float(self.values[0] / last) if last > 0 else float("inf")

    @property
    def normalization(self) -> float:
        return float(np.sum(self.values**2))

    @classmethod
    def from_values(cls, values: np.ndarray, m: int) -> "Spectrum":
        """Sort arbitrary non-negative values into a Spectrum"""
        return cls(values=np.sort(np.asarray(values, dtype=float))[::-1].copy(), m=m)


@dataclass(frozen=True)
class SpectralOperator:
    """
    Linear operator A = U·diag(s)·Vᵀ

    Attributes:
        m: Row count (measurements)
        n: Column count (unknowns)
        s: N singular values, zero beyond min(m, n)
        u: Orthogonal map on R^M
        v: Orthogonal map on R^N
        kind: Representation of the factors
        matrix: Optional dense A, kept when the operator came from one
    """

    m: int
    n: int
    s: np.ndarray
    u: OrthogonalMap
    v: OrthogonalMap
    kind: OperatorKind = OperatorKind.CUSTOM
    matrix: Optional[np.ndarray] = None

    def __post_init__(self):
        s = np.asarray(self.s, dtype=float)
        object.__setattr__(self, "s", s)
        if self.m < 1 or self.n < 1:
            raise InvalidDimensionError(f"operator dimensions must be positive, got {self.m}×{self.n}")
        if s.shape != (self.n,):
            raise InvalidDimensionError(f"need {self.n} singular values, got shape {s.shape}")
        if self.u.dim != self.m or self.v.dim != self.n:
            raise InvalidDimensionError(
                f"factor sizes {self.u.dim}, {self.v.dim} do not match {self.m}×{self.n}"
            )
        if np.any(s < 0) or not np.all(np.isfinite(s)):
            raise InvalidSpectrumError("singular values must be finite and non-negative")
        if np.any(s[self.rank_bound:] != 0):
            raise InvalidSpectrumError("singular values beyond min(m, n) must be zero")

    @property
    def rank_bound(self) -> int:
        return min(self.m, self.n)

    @property
    def s_max(self) -> float:
        return float(np.max(self.s))

    @property
    def spectrum(self) -> Spectrum:
        return Spectrum.from_values(self.s, self.m)

    def v_apply(self, z: np.ndarray) -> np.ndarray:
        return self.v.apply(z)

    def v_adjoint(self, x: np.ndarray) -> np.ndarray:
        return self.v.adjoint(x)

    def u_apply(self, z: np.ndarray) -> np.ndarray:
        return self.u.apply(z)

    def u_adjoint(self, y: np.ndarray) -> np.ndarray:
        return self.u.adjoint(y)

    def forward(self, x: np.ndarray) -> np.ndarray:
        """A·x"""
        k = self.rank_bound
        scaled = self.s * self.v.adjoint(x)
        out = np.zeros(self.m)
        out[:k] = scaled[:k]
        return self.u.apply(out)

    def adjoint(self, y: np.ndarray) -> np.ndarray:
        """Aᵀ·y"""
        k = self.rank_bound
        rotated = self.u.adjoint(y)
        padded = np.zeros(self.n)
        padded[:k] = rotated[:k]
        return self.v.apply(self.s * padded)

    def u_adjoint_padded(self, y: np.ndarray) -> np.ndarray:
        """Uᵀy truncated or zero-padded to length N (aligned with s)"""
        k = self.rank_bound
        out = np.zeros(self.n)
        out[:k] = self.u.adjoint(y)[:k]
        return out

    def with_domain_map(self, psi: OrthogonalMap) -> "SpectralOperator":
        """
        Operator acting on coefficients c with x = Ψᵀc, i.e. A·Ψᵀ

        The right factor becomes Ψ·V, so the SVD form is preserved.
        """
        if psi.dim != self.n:
            raise InvalidDimensionError(f"domain map has size {psi.dim}, operator has {self.n} columns")
        return SpectralOperator(
            m=self.m,
            n=self.n,
            s=self.s,
            u=self.u,
            v=psi.compose(self.v),
            kind=OperatorKind.CUSTOM,
        )


def haar_orthogonal(n: int, seed: int) -> OrthogonalMap:
    """
    Sample an n×n orthogonal matrix uniformly (Haar measure)

    QR of a standard-normal matrix with the signs of R's diagonal folded
    into the columns of Q.
    """
    if n < 1:
        raise InvalidDimensionError(f"dimension must be at least 1, got {n}")
    rng = make_rng(seed)
    z = rng.standard_normal((n, n))
    q, r = scipy.linalg.qr(z)
    signs = np.sign(np.diag(r))
    signs[signs == 0] = 1.0
    return OrthogonalMap.from_matrix(q * signs)


def geometric_spectrum(m: int, n: int, cond: float) -> Spectrum:
    """
    M geometrically spaced singular values with s₁/s_M = cond

    Zero-padded to length N and scaled so that Σ s_i² = N.
    """
    if not 1 <= m <= n:
        raise InvalidDimensionError(f"need 1 ≤ m ≤ n, got m={m}, n={n}")
    if not np.isfinite(cond) or cond < 1:
        raise InvalidSpectrumError(f"condition number must be ≥ 1, got {cond}")
    if m == 1 or cond == 1:
        head = np.ones(m)
    else:
        rho = cond ** (-1.0 / (m - 1))
        head = rho ** np.arange(m)
    head *= np.sqrt(n / np.sum(head**2))
    values = np.zeros(n)
    values[:m] = head
    if m > 1:
        # pin the ratio exactly; scaling above can perturb the last ulp
        values[m - 1] = values[0] / cond
    return Spectrum(values=values, m=m)


def build_operator(spectrum: Spectrum, u_seed: int, v_seed: int) -> SpectralOperator:
    """Dense operator with independent Haar U, V and the given spectrum"""
    logger.debug(
        f"Building dense-haar operator {spectrum.m}×{spectrum.n} (cond={spectrum.cond:.3g})"
    )
    return SpectralOperator(
        m=spectrum.m,
        n=spectrum.n,
        s=spectrum.values,
        u=haar_orthogonal(spectrum.m, u_seed),
        v=haar_orthogonal(spectrum.n, v_seed),
        kind=OperatorKind.DENSE_HAAR,
    )


def identity_operator(n: int) -> SpectralOperator:
    return SpectralOperator(
        m=n, n=n, s=np.ones(n), u=OrthogonalMap.identity(n), v=OrthogonalMap.identity(n)
    )


def operator_from_matrix(a: np.ndarray, kind: OperatorKind = OperatorKind.CUSTOM) -> SpectralOperator:
    """Wrap a dense matrix; its full SVD is computed once here"""
    a = np.asarray(a, dtype=float)
    if a.ndim != 2:
        raise InvalidDimensionError(f"expected a matrix, got shape {a.shape}")
    m, n = a.shape
    u, sv, vt = np.linalg.svd(a, full_matrices=True)
    s = np.zeros(n)
    s[: sv.size] = sv
    return SpectralOperator(
        m=m,
        n=n,
        s=s,
        u=OrthogonalMap.from_matrix(u),
        v=OrthogonalMap.from_matrix(vt.T),
        kind=kind,
        matrix=a,
    )


def iid_gaussian_operator(m: int, n: int, seed: int) -> SpectralOperator:
    """Dense i.i.d. Gaussian matrix rescaled so that ‖A‖_F² = N"""
    if m < 1 or n < 1:
        raise InvalidDimensionError(f"operator dimensions must be positive, got {m}×{n}")
    g = make_rng(seed).standard_normal((m, n))
    g *= np.sqrt(n / np.sum(g**2))
    return operator_from_matrix(g)


def dense_matrix(operator: SpectralOperator) -> np.ndarray:
    """Materialize A as an M×N array"""
    if operator.matrix is not None:
        return operator.matrix
    eye = np.eye(operator.n)
    return np.column_stack([operator.forward(eye[:, j]) for j in range(operator.n)])
