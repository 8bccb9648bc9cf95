"""
Image recovery with VAMP, by two routes

wavelet: estimate the Haar coefficients c of x = Ψᵀc through the operator
         A·Ψᵀ with a soft-threshold denoiser, then form x̂ = Ψᵀĉ
direct:  run VAMP on the pixels with the configured image denoiser
"""

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any, List, Optional, Union

import numpy as np
from loguru import logger

from config.scenario_config import ImageRoute, ScenarioConfig
from denoisers.base import DenoiserSpec
from denoisers.separable import SoftThreshold
from operators.pgm import read_pgm, write_pgm
from operators.spectral import SpectralOperator
from operators.wavelet import wavelet_map
from scenarios.common import (
    NOISE_STREAM,
    OPERATOR_STREAM,
    Cell,
    CellResult,
    ScenarioPlan,
    draw_truth,
    grid_cells,
    image_side,
    make_denoiser,
    measurement_count,
    measurement_operator,
    noise_precision,
    vamp_config,
)
from solvers.problem import make_instance
from solvers.vamp import VampConfig, VampTrajectory, vamp_run
from utils.constants import RECOVERED_PGM
from utils.exceptions import ConfigError, InvalidDimensionError
from utils.metrics import clip_to_pixels, mse_db, psnr
from utils.rng import derive_seed

RESULT_COLUMNS = (
    "trial",
    "seed",
    "route",
    "rate",
    "psnr_db",
    "mse_db",
    "iterations_run",
    "clamped_flag",
)


@dataclass
class ImageRecovery:
    route: ImageRoute
    image: np.ndarray
    psnr_db: float
    mse_db: float
    trajectory: VampTrajectory
    path: Optional[Path] = None


def image_pipeline(
    image: Union[Path, str, np.ndarray],
    operator: SpectralOperator,
    route: ImageRoute,
    vamp: VampConfig,
    gamma_w0: float,
    denoiser: Optional[DenoiserSpec] = None,
    levels: Optional[int] = None,
    threshold_scale: float = 1.0,
    gamma_w: Optional[float] = None,
    seed: int = 0,
    output_path: Optional[Path] = None,
) -> ImageRecovery:
    """
    Recover an L×L image from y = A·x + w

    Args:
        image: PGM path or L×L array in [0, 255]
        operator: A with N = L² columns
        route: wavelet or direct
        vamp: Solver settings
        gamma_w0: True noise precision (inf for noiseless)
        denoiser: Pixel-domain denoiser for the direct route
        levels: Haar depth for the wavelet route, log2(L) by default
        threshold_scale: λ of the wavelet-route soft-threshold θ = λ/√γ
        gamma_w: Postulated noise precision
        seed: Noise seed
        output_path: Where to write the recovered PGM, if anywhere
    """
    x0 = read_pgm(Path(image)) if isinstance(image, (str, Path)) else np.asarray(image, dtype=float)
    if x0.ndim != 2 or x0.shape[0] != x0.shape[1]:
        raise InvalidDimensionError(f"image must be square, got shape {x0.shape}")
    side = x0.shape[0]
    x0 = x0.ravel()
    if operator.n != x0.size:
        raise InvalidDimensionError(f"operator has {operator.n} columns, image has {x0.size} pixels")

    route = ImageRoute(route)
    if route == ImageRoute.WAVELET:
        psi = wavelet_map(side, int(math.log2(side)) if levels is None else levels)
        problem = make_instance(
            psi.apply(x0), operator.with_domain_map(psi), gamma_w0, gamma_w=gamma_w, seed=seed
        )
        trajectory = vamp_run(problem, SoftThreshold(threshold_scale=threshold_scale), vamp)
        xhat = psi.adjoint(trajectory.final_xhat)
    elif route == ImageRoute.DIRECT:
        if denoiser is None:
            raise ConfigError("direct route needs a pixel-domain denoiser")
        problem = make_instance(x0, operator, gamma_w0, gamma_w=gamma_w, seed=seed)
        trajectory = vamp_run(problem, denoiser, vamp)
        xhat = trajectory.final_xhat
    else:
        raise ConfigError(f"image_pipeline runs one route at a time, got {route.value}")

    recovered = clip_to_pixels(xhat).reshape(side, side)
    recovery = ImageRecovery(
        route=route,
        image=recovered,
        psnr_db=psnr(xhat, x0),
        mse_db=mse_db(recovered.ravel(), x0),
        trajectory=trajectory,
    )
    if output_path is not None:
        recovery.path = write_pgm(output_path, recovered)
        logger.info(f"💾 Recovered image ({route.value}) written to {recovery.path}")
    return recovery


def _routes(config: ScenarioConfig) -> List[ImageRoute]:
    if config.image.route == ImageRoute.BOTH:
        return [ImageRoute.WAVELET, ImageRoute.DIRECT]
    return [config.image.route]


def cells(config: ScenarioConfig) -> List[Cell]:
    return grid_cells(config, {})


def run_cell(config: ScenarioConfig, cell: Cell, context: Any, out_dir: Path) -> CellResult:
    result = CellResult(cell=cell)
    x0 = draw_truth(config, cell.seed)
    n = x0.size
    side = image_side(n)
    operator = measurement_operator(
        config, n, measurement_count(n, config.rate), config.operator.cond, derive_seed(cell.seed, OPERATOR_STREAM)
    )
    gamma_w0 = noise_precision(config, operator, x0)

    for route in _routes(config):
        output = None
        if config.image.write_images and cell.trial == 0:
            output = Path(out_dir) / f"{route.value}_{RECOVERED_PGM}"
        recovery = result.timed(
            route.value,
            lambda: image_pipeline(
                x0.reshape(side, side),
                operator,
                route,
                vamp_config(config, cell.seed),
                gamma_w0,
                denoiser=make_denoiser(config, n) if route == ImageRoute.DIRECT else None,
                levels=config.image.levels,
                threshold_scale=config.image.threshold_scale,
                gamma_w=config.noise.gamma_w,
                seed=derive_seed(cell.seed, NOISE_STREAM),
                output_path=output,
            ),
        )
        result.results.append(
            {
                "trial": cell.trial,
                "seed": cell.seed,
                "route": route.value,
                "rate": config.rate,
                "psnr_db": recovery.psnr_db,
                "mse_db": recovery.mse_db,
                "iterations_run": len(recovery.trajectory.states),
                "clamped_flag": recovery.trajectory.clamped,
            }
        )
    return result


PLAN = ScenarioPlan(result_columns=RESULT_COLUMNS, cells=cells, run_cell=run_cell)
