"""
Problem instances y = A·x0 + w and signal generators
"""

import math
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from pathlib import Path
from typing import Optional, Union

import numpy as np
import scipy.signal
from loguru import logger

from operators.pgm import read_pgm
from operators.spectral import SpectralOperator
from utils.constants import NOISELESS_GAMMA_W
from utils.exceptions import InvalidDimensionError, ScenarioError
from utils.rng import derive_seed, make_rng


class SignalKind(str, Enum):
    BERNOULLI_GAUSSIAN = "bernoulli-gaussian"
    GROUP_ROWS = "group-rows"
    STATIONARY_AR = "stationary-ar"
    IMAGE_FILE = "image-file"
    PIECEWISE_IMAGE = "piecewise-image"
    RANK_ONE_LIFT = "rank-one-lift"


@dataclass(frozen=True)
class SignalSpec:
    """
    Generator description for the truth x0

    Attributes:
        kind: Generator family
        n: Signal length (image kinds: side², taken from the image)
        rho: Activity probability (entries or rows)
        sigma2: Variance of active entries / AR marginal variance
        group_size: Row length for group-rows
        ar_coeff: AR(1) coefficient in (−1, 1)
        image_path: PGM file for image-file
        side: Image side for piecewise-image
        regions: Number of constant rectangles for piecewise-image
    """

    kind: SignalKind = SignalKind.BERNOULLI_GAUSSIAN
    n: int = 0
    rho: float = 0.1
    sigma2: float = 1.0
    group_size: int = 4
    ar_coeff: float = 0.9
    image_path: Optional[str] = None
    side: int = 64
    regions: int = 8


def piecewise_constant_image(side: int, seed: int, regions: int = 8) -> np.ndarray:
    """Random axis-aligned rectangles of constant intensity in [0, 255]"""
    rng = make_rng(seed)
    image = np.full((side, side), float(rng.integers(0, 256)))
    for _ in range(regions):
        r0, r1 = np.sort(rng.integers(0, side + 1, size=2))
        c0, c1 = np.sort(rng.integers(0, side + 1, size=2))
        image[r0:r1, c0:c1] = float(rng.integers(0, 256))
    return image


def draw_signal(spec: SignalSpec, seed: int) -> np.ndarray:
    """Draw x0 according to `spec`"""
    rng = make_rng(seed)
    kind = SignalKind(spec.kind)

    if kind == SignalKind.BERNOULLI_GAUSSIAN:
        active = rng.random(spec.n) < spec.rho
        return np.where(active, rng.standard_normal(spec.n) * np.sqrt(spec.sigma2), 0.0)

    if kind == SignalKind.GROUP_ROWS:
        if spec.n % spec.group_size:
            raise InvalidDimensionError(f"group size {spec.group_size} does not divide {spec.n}")
        rows = spec.n // spec.group_size
        active = rng.random(rows) < spec.rho
        values = rng.standard_normal((rows, spec.group_size)) * np.sqrt(spec.sigma2)
        return (values * active[:, None]).ravel()

    if kind == SignalKind.STATIONARY_AR:
        a = spec.ar_coeff
        if not -1 < a < 1:
            raise ScenarioError(f"AR coefficient must lie in (−1, 1), got {a}", "signal")
        std = np.sqrt(spec.sigma2)
        drive = rng.standard_normal(spec.n) * std * np.sqrt(1 - a**2)
        start = np.array([a * std * rng.standard_normal()])
        x, _ = scipy.signal.lfilter([1.0], [1.0, -a], drive, zi=start)
        return x

    if kind == SignalKind.IMAGE_FILE:
        if not spec.image_path:
            raise ScenarioError("image-file signal needs image_path", "signal")
        return read_pgm(Path(spec.image_path)).ravel()

    if kind == SignalKind.PIECEWISE_IMAGE:
        return piecewise_constant_image(spec.side, seed, spec.regions).ravel()

    raise ScenarioError(f"signal kind {kind.value} is generated by the lifting module", "signal")


def gamma_w0_for_snr(operator: SpectralOperator, x0: np.ndarray, snr_db: float) -> float:
    """Noise precision giving 10·log10(‖A·x0‖² / E‖w‖²) = snr_db"""
    if math.isinf(snr_db) and snr_db > 0:
        return math.inf
    energy = float(np.sum(operator.forward(x0) ** 2))
    if energy == 0.0:
        raise InvalidDimensionError("SNR undefined: A·x0 is zero")
    return operator.m * 10.0 ** (snr_db / 10.0) / energy


@dataclass(frozen=True)
class ProblemInstance:
    """
    A linear inverse problem with known truth

    Attributes:
        x0: Truth (N)
        operator: Measurement operator A
        y: Measurements A·x0 + w (M)
        gamma_w0: True noise precision (inf for noiseless)
        gamma_w: Noise precision assumed by the estimator
        noise: The realized w
        seed: Seed that generated the noise (and x0 when drawn here)
    """

    x0: np.ndarray
    operator: SpectralOperator
    y: np.ndarray
    gamma_w0: float
    gamma_w: float
    noise: np.ndarray = field(repr=False)
    seed: int = 0

    def __post_init__(self):
        if self.x0.shape != (self.operator.n,) or self.y.shape != (self.operator.m,):
            raise InvalidDimensionError(
                f"x0 {self.x0.shape} / y {self.y.shape} do not fit a {self.operator.m}×{self.operator.n} operator"
            )
        if not (np.isfinite(self.gamma_w) and self.gamma_w > 0):
            raise InvalidDimensionError(f"postulated noise precision must be positive, got {self.gamma_w}")

    @property
    def n(self) -> int:
        return self.operator.n

    @property
    def m(self) -> int:
        return self.operator.m

    @cached_property
    def projected_measurements(self) -> np.ndarray:
        """diag(s)·Uᵀy as an N-vector, the data term of the LMMSE solve"""
        return self.operator.s * self.operator.u_adjoint_padded(self.y)

    @cached_property
    def projected_noise(self) -> np.ndarray:
        """ξ = Uᵀw zero-padded to N"""
        return self.operator.u_adjoint_padded(self.noise)


def make_instance(
    x0_source: Union[SignalSpec, np.ndarray],
    operator: SpectralOperator,
    gamma_w0: float,
    gamma_w: Optional[float] = None,
    seed: int = 0,
) -> ProblemInstance:
    """
    Draw (or take) x0 and form y = A·x0 + N(0, I/gamma_w0)

    Args:
        x0_source: A SignalSpec, or the truth vector itself
        operator: Measurement operator
        gamma_w0: True noise precision; math.inf means noiseless
        gamma_w: Postulated precision, defaults to gamma_w0 (or a large
            finite value for noiseless problems)
        seed: Seed for x0 and noise
    """
    if isinstance(x0_source, SignalSpec):
        spec = x0_source
        if spec.n == 0 and spec.kind not in (SignalKind.IMAGE_FILE, SignalKind.PIECEWISE_IMAGE):
            spec = SignalSpec(**{**spec.__dict__, "n": operator.n})
        x0 = draw_signal(spec, derive_seed(seed, 0))
    else:
        x0 = np.asarray(x0_source, dtype=float).ravel().copy()
    if x0.size != operator.n:
        raise InvalidDimensionError(f"signal has {x0.size} entries, operator has {operator.n} columns")

    if not gamma_w0 > 0:
        raise InvalidDimensionError(f"noise precision must be positive, got {gamma_w0}")
    if math.isinf(gamma_w0):
        noise = np.zeros(operator.m)
    else:
        noise = make_rng(derive_seed(seed, 1)).standard_normal(operator.m) / np.sqrt(gamma_w0)

    if gamma_w is None:
        gamma_w = NOISELESS_GAMMA_W if math.isinf(gamma_w0) else gamma_w0

    y = operator.forward(x0) + noise
    logger.debug(
        f"Instance {operator.m}×{operator.n}, gamma_w0={gamma_w0:.4g}, gamma_w={gamma_w:.4g}, seed={seed}"
    )
    return ProblemInstance(
        x0=x0,
        operator=operator,
        y=y,
        gamma_w0=float(gamma_w0),
        gamma_w=float(gamma_w),
        noise=noise,
        seed=int(seed),
    )

