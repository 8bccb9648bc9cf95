"""
cond-sweep and rate-sweep: VAMP (and optionally AMP) over a grid of
condition numbers or measurement rates
"""

from pathlib import Path
from typing import Any, Dict, List

import numpy as np
from loguru import logger

from config.scenario_config import ScenarioConfig
from scenarios.common import (
    OPERATOR_STREAM,
    SOLVER_STREAM,
    Cell,
    CellResult,
    ScenarioPlan,
    build_problem,
    draw_truth,
    grid_cells,
    is_image,
    make_denoiser,
    measurement_count,
    measurement_operator,
    recovery_metrics,
    vamp_config,
)
from solvers.amp import amp_run
from solvers.vamp import vamp_run
from utils.rng import derive_seed

METRIC_COLUMNS = ("method", "iterations_run", "mse_db", "nmse_db", "psnr_db", "diverged_flag", "clamped_flag")
COND_COLUMNS = ("cond", "rate", "trial", "seed") + METRIC_COLUMNS
RATE_COLUMNS = ("rate", "cond", "trial", "seed") + METRIC_COLUMNS


def _run_methods(config: ScenarioConfig, cell: Cell, rate: float, cond: float) -> CellResult:
    result = CellResult(cell=cell)
    x0 = draw_truth(config, cell.seed)
    n = x0.size
    operator = measurement_operator(
        config, n, measurement_count(n, rate), cond, derive_seed(cell.seed, OPERATOR_STREAM)
    )
    problem = build_problem(config, x0, operator, cell.seed)
    denoiser = make_denoiser(config, n)
    image = is_image(config)
    base = {**cell.coordinates, "rate": rate, "cond": cond, "trial": cell.trial, "seed": cell.seed}

    trajectory = result.timed("vamp", lambda: vamp_run(problem, denoiser, vamp_config(config, cell.seed)))
    result.results.append(
        {
            **base,
            "method": "vamp",
            "iterations_run": len(trajectory.states),
            **recovery_metrics(trajectory.final_xhat, x0, image),
            "diverged_flag": False,
            "clamped_flag": trajectory.clamped,
        }
    )

    if config.run_amp:
        amp = result.timed(
            "amp",
            lambda: amp_run(problem, denoiser, config.iterations, seed=derive_seed(cell.seed, SOLVER_STREAM)),
        )
        metrics = recovery_metrics(amp.final_xhat, x0, image) if amp.states else {}
        if amp.diverged:
            logger.info(f"AMP diverged at cond={cond:g} rate={rate:g} trial={cell.trial}")
        result.results.append(
            {
                **base,
                "method": "amp",
                "iterations_run": len(amp.states),
                **metrics,
                "diverged_flag": amp.diverged,
                "clamped_flag": False,
            }
        )
    return result


def cond_cells(config: ScenarioConfig) -> List[Cell]:
    return grid_cells(config, {"cond": config.operator.conds})


def run_cond_cell(config: ScenarioConfig, cell: Cell, context: Any, out_dir: Path) -> CellResult:
    return _run_methods(config, cell, config.rate, float(cell.coordinates["cond"]))


def rate_cells(config: ScenarioConfig) -> List[Cell]:
    return grid_cells(config, {"rate": config.rates})


def run_rate_cell(config: ScenarioConfig, cell: Cell, context: Any, out_dir: Path) -> CellResult:
    return _run_methods(config, cell, float(cell.coordinates["rate"]), config.operator.cond)


COND_PLAN = ScenarioPlan(result_columns=COND_COLUMNS, cells=cond_cells, run_cell=run_cond_cell)
RATE_PLAN = ScenarioPlan(result_columns=RATE_COLUMNS, cells=rate_cells, run_cell=run_rate_cell)


def median_by(rows: List[Dict[str, Any]], key: str, metric: str, method: str = "vamp") -> Dict[Any, float]:
    """Median of `metric` per value of `key`, for summaries and tests"""
    groups: Dict[Any, List[float]] = {}
    for row in rows:
        if row.get("method") == method and row.get(metric) not in (None, ""):
            groups.setdefault(row[key], []).append(float(row[metric]))
    return {k: float(np.median(v)) for k, v in sorted(groups.items())}
