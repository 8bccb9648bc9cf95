"""
Shared pieces of the scenario runners: cells, results and builders that
turn config sections into operators, denoisers and problem instances
"""

import math
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence

import numpy as np

from config.scenario_config import OperatorChoice, ScenarioConfig
from denoisers.base import DenoiserKind, DenoiserSpec
from denoisers.registry import build_denoiser
from operators.hadamard import fast_jphd_operator
from operators.spectral import (
    SpectralOperator,
    build_operator,
    geometric_spectrum,
    identity_operator,
    iid_gaussian_operator,
)
from solvers.problem import ProblemInstance, SignalKind, SignalSpec, draw_signal, gamma_w0_for_snr, make_instance
from solvers.vamp import InitMode, VampConfig
from utils.exceptions import ConfigError, InvalidDimensionError
from utils.metrics import mse_db, nmse_db, psnr
from utils.rng import derive_seed

# seed streams under a cell seed
SIGNAL_STREAM = 0
OPERATOR_STREAM = 1
NOISE_STREAM = 2
SOLVER_STREAM = 3

RUNTIME_COLUMNS = ("cell", "trial", "seed", "method", "runtime_ms")


@dataclass(frozen=True)
class Cell:
    """One point of a scenario grid; `seed` is derived from the master seed and the coordinates"""

    index: int
    coordinates: Dict[str, Any]
    seed: int
    trial: int = 0

    def describe(self) -> Dict[str, Any]:
        return {"index": self.index, "trial": self.trial, "seed": self.seed, **self.coordinates}


@dataclass
class CellResult:
    cell: Cell
    results: List[Dict[str, Any]] = field(default_factory=list)
    se: List[Dict[str, Any]] = field(default_factory=list)
    runtime: List[Dict[str, Any]] = field(default_factory=list)

    def timed(self, method: str, fn: Callable[[], Any]) -> Any:
        """Run fn, record its wall-clock time under `method`, return its value"""
        start = time.perf_counter()
        value = fn()
        self.runtime.append(
            {
                "cell": self.cell.index,
                "trial": self.cell.trial,
                "seed": self.cell.seed,
                "method": method,
                "runtime_ms": (time.perf_counter() - start) * 1e3,
            }
        )
        return value


@dataclass
class ScenarioPlan:
    """
    How a scenario is run

    Attributes:
        result_columns: Header of results.csv
        se_columns: Header of se.csv, None when the scenario has no SE output
        cells: Expands a config into its grid of cells
        run_cell: Computes one cell
        prepare: Optional work shared by every cell (its return value is
            handed to run_cell as `context`)
        shared_se: Optional SE rows derived from the prepared context
    """

    result_columns: Sequence[str]
    cells: Callable[[ScenarioConfig], List[Cell]]
    run_cell: Callable[[ScenarioConfig, Cell, Any, Path], CellResult]
    se_columns: Optional[Sequence[str]] = None
    prepare: Optional[Callable[[ScenarioConfig], Any]] = None
    shared_se: Optional[Callable[[Any], List[Dict[str, Any]]]] = None


def grid_cells(config: ScenarioConfig, axes: Dict[str, Sequence[Any]]) -> List[Cell]:
    """Cartesian product of the axes (in the given order) times config.trials"""
    names = list(axes)
    values = [list(axes[name]) for name in names]
    shape = [len(v) for v in values] + [config.trials]
    cells: List[Cell] = []
    for index, position in enumerate(np.ndindex(*shape)):
        *grid, trial = position
        coordinates = {name: values[i][j] for i, (name, j) in enumerate(zip(names, grid))}
        seed = derive_seed(config.master_seed, *grid, trial)
        cells.append(Cell(index=index, coordinates=coordinates, seed=seed, trial=trial))
    return cells


def measurement_count(n: int, rate: float) -> int:
    m = int(round(rate * n))
    if not 1 <= m <= n:
        raise InvalidDimensionError(f"rate {rate} gives M={m} for N={n}")
    return m


def measurement_operator(config: ScenarioConfig, n: int, m: int, cond: float, seed: int) -> SpectralOperator:
    """Operator of the configured kind with Σ s² = N and s₁/s_M = cond"""
    kind = config.operator.kind
    if kind == OperatorChoice.DENSE_HAAR:
        return build_operator(
            geometric_spectrum(m, n, cond), u_seed=derive_seed(seed, 0), v_seed=derive_seed(seed, 1)
        )
    if kind == OperatorChoice.FAST_JPHD:
        return fast_jphd_operator(n, m, seed, spectrum=geometric_spectrum(m, n, cond))
    if kind == OperatorChoice.IID_GAUSSIAN:
        return iid_gaussian_operator(m, n, seed)
    if m != n:
        raise ConfigError(f"identity operator needs M = N, got M={m}, N={n}")
    return identity_operator(n)


def signal_spec(config: ScenarioConfig, n: int = 0) -> SignalSpec:
    sig = config.signal
    return SignalSpec(
        kind=sig.kind,
        n=n,
        rho=sig.rho,
        sigma2=sig.sigma2,
        group_size=sig.group_size,
        ar_coeff=sig.ar_coeff,
        image_path=sig.image_path,
        side=sig.side,
        regions=sig.regions,
    )


def draw_truth(config: ScenarioConfig, seed: int) -> np.ndarray:
    """x0 for vector scenarios (length config.n) or image scenarios (side²)"""
    return draw_signal(signal_spec(config, config.n), derive_seed(seed, SIGNAL_STREAM))


def is_image(config: ScenarioConfig) -> bool:
    return config.signal.kind in (SignalKind.IMAGE_FILE, SignalKind.PIECEWISE_IMAGE)


def image_side(n: int) -> int:
    side = int(math.isqrt(n))
    if side * side != n:
        raise InvalidDimensionError(f"{n} pixels do not form a square image")
    return side


def make_denoiser(config: ScenarioConfig, n: int) -> DenoiserSpec:
    """Build the configured denoiser, filling parameters the signal section implies"""
    section = config.denoiser
    params = section.build_params()
    kind = section.kind
    if kind == DenoiserKind.BG_MMSE:
        params.setdefault("rho", config.signal.rho)
        params.setdefault("sigma_x2", config.signal.sigma2)
    if kind in (
        DenoiserKind.SOFT_THRESHOLD,
        DenoiserKind.GROUP_SOFT_THRESHOLD,
        DenoiserKind.WAVELET_SOFT_THRESHOLD,
    ):
        if params.get("threshold") is None and params.get("threshold_scale") is None:
            params["threshold_scale"] = 1.0
    if kind == DenoiserKind.GROUP_SOFT_THRESHOLD:
        params.setdefault("group_size", config.signal.group_size)
    if kind == DenoiserKind.WAVELET_SOFT_THRESHOLD:
        side = image_side(n)
        params.setdefault("side", side)
        params.setdefault("levels", int(math.log2(side)))
    if kind == DenoiserKind.SVT:
        side = image_side(n)
        params.setdefault("shape", [side, side])
    return build_denoiser(kind.value, **params)


def noise_precision(config: ScenarioConfig, operator: SpectralOperator, x0: np.ndarray) -> float:
    if config.noise.gamma_w0 is not None:
        return config.noise.gamma_w0
    return gamma_w0_for_snr(operator, x0, config.noise.snr_db)


def build_problem(config: ScenarioConfig, x0: np.ndarray, operator: SpectralOperator, seed: int) -> ProblemInstance:
    return make_instance(
        x0,
        operator,
        noise_precision(config, operator, x0),
        gamma_w=config.noise.gamma_w,
        seed=derive_seed(seed, NOISE_STREAM),
    )


def vamp_config(config: ScenarioConfig, seed: int) -> VampConfig:
    section = config.vamp
    if section.init_mode == InitMode.CUSTOM:
        raise ConfigError("custom VAMP initialization is only available through the library API")
    return VampConfig(
        iterations=config.iterations,
        init_mode=section.init_mode,
        gamma10=section.gamma10,
        tau10=section.tau10,
        seed=derive_seed(seed, SOLVER_STREAM),
        damping=section.damping,
        tol=section.tol,
    )


def recovery_metrics(xhat: np.ndarray, x0: np.ndarray, image: bool) -> Dict[str, Any]:
    finite = bool(np.all(np.isfinite(xhat)))
    return {
        "mse_db": mse_db(xhat, x0) if finite else None,
        "nmse_db": nmse_db(xhat, x0) if finite and np.any(x0) else None,
        "psnr_db": psnr(xhat, x0) if finite and image else None,
    }
