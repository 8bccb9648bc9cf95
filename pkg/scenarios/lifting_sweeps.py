"""
Lifted bilinear scenarios

csmu-sweep:       CS with matrix uncertainty over M/P
csmu-cond-sweep:  the same over cond(A) with Haar factors and geometric spectrum
selfcal-grid:     self-calibration success over a (K, L) grid
"""

from pathlib import Path
from typing import Any, Dict, List

from config.scenario_config import ScenarioConfig
from lifting.instances import (
    LiftedInstance,
    OperatorStyle,
    lifted_denoiser,
    make_csmu_instance,
    make_selfcal_instance,
)
from lifting.oracles import oracle_nmse_db
from lifting.scoring import LIFT_COLUMNS, score_recovery
from scenarios.common import Cell, CellResult, ScenarioPlan, grid_cells, vamp_config
from solvers.vamp import vamp_run

CSMU_COLUMNS = ("rate", "cond", "trial", "seed") + LIFT_COLUMNS + ("oracle_b_db", "oracle_c_db")
SELFCAL_COLUMNS = ("sparsity", "subspace_dim", "trial", "seed") + LIFT_COLUMNS


def _recover(config: ScenarioConfig, cell: Cell, instance: LiftedInstance, result: CellResult) -> Dict[str, Any]:
    denoiser = lifted_denoiser(instance, inner_iters=config.lifting.inner_iters)
    trajectory = result.timed(
        "lifted-vamp",
        lambda: vamp_run(instance.problem, denoiser, vamp_config(config, cell.seed)),
    )
    return score_recovery(trajectory.final_xhat, instance).to_row()


def _csmu_row(config: ScenarioConfig, cell: Cell, rate: float, cond: float, style: OperatorStyle) -> CellResult:
    lift = config.lifting
    result = CellResult(cell=cell)
    m = max(1, int(round(rate * lift.factor_len)))
    instance = make_csmu_instance(
        lift.subspace_dim,
        lift.factor_len,
        lift.sparsity,
        m,
        lift.b1_known,
        operator_style=style,
        cond=cond,
        snr_db=config.noise.snr_db,
        seed=cell.seed,
    )
    scores = _recover(config, cell, instance, result)
    oracle_b, oracle_c = oracle_nmse_db(instance)
    result.results.append(
        {
            "rate": rate,
            "cond": cond,
            "trial": cell.trial,
            "seed": cell.seed,
            **scores,
            "oracle_b_db": oracle_b,
            "oracle_c_db": oracle_c,
        }
    )
    return result


def csmu_cells(config: ScenarioConfig) -> List[Cell]:
    return grid_cells(config, {"rate": config.lifting.rates})


def run_csmu_cell(config: ScenarioConfig, cell: Cell, context: Any, out_dir: Path) -> CellResult:
    return _csmu_row(
        config, cell, float(cell.coordinates["rate"]), config.operator.cond, config.lifting.operator_style
    )


def csmu_cond_cells(config: ScenarioConfig) -> List[Cell]:
    return grid_cells(config, {"cond": config.operator.conds})


def run_csmu_cond_cell(config: ScenarioConfig, cell: Cell, context: Any, out_dir: Path) -> CellResult:
    return _csmu_row(
        config, cell, config.lifting.rate, float(cell.coordinates["cond"]), OperatorStyle.HAAR_GEOMETRIC
    )


def selfcal_cells(config: ScenarioConfig) -> List[Cell]:
    return grid_cells(
        config, {"sparsity": config.lifting.sparsities, "subspace_dim": config.lifting.subspace_dims}
    )


def run_selfcal_cell(config: ScenarioConfig, cell: Cell, context: Any, out_dir: Path) -> CellResult:
    result = CellResult(cell=cell)
    instance = make_selfcal_instance(
        int(cell.coordinates["subspace_dim"]),
        config.lifting.factor_len,
        int(cell.coordinates["sparsity"]),
        config.lifting.m,
        seed=cell.seed,
    )
    result.results.append(
        {**cell.coordinates, "trial": cell.trial, "seed": cell.seed, **_recover(config, cell, instance, result)}
    )
    return result


CSMU_PLAN = ScenarioPlan(result_columns=CSMU_COLUMNS, cells=csmu_cells, run_cell=run_csmu_cell)
CSMU_COND_PLAN = ScenarioPlan(result_columns=CSMU_COLUMNS, cells=csmu_cond_cells, run_cell=run_csmu_cond_cell)
SELFCAL_PLAN = ScenarioPlan(result_columns=SELFCAL_COLUMNS, cells=selfcal_cells, run_cell=run_selfcal_cell)
