"""
se-validate: empirical VAMP MSE against the state-evolution prediction

The truth x0 is drawn once and shared by every trial; each trial draws its
own operator factors and noise. SE runs once on that x0.
"""

from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np
from loguru import logger

from config.scenario_config import OperatorChoice, ScenarioConfig
from denoisers.base import DenoiserSpec
from operators.spectral import Spectrum
from scenarios.common import (
    OPERATOR_STREAM,
    Cell,
    CellResult,
    ScenarioPlan,
    build_problem,
    draw_truth,
    grid_cells,
    make_denoiser,
    measurement_count,
    measurement_operator,
    vamp_config,
)
from solvers.vamp import InitMode, vamp_run
from state_evolution.diagnostics import gaussianity_diagnostics
from state_evolution.recursion import SE_COLUMNS, SeTrajectory, se_run
from utils.metrics import to_db
from utils.rng import derive_seed

RESULT_COLUMNS = (
    "trial",
    "seed",
    "k",
    "mse1_db",
    "se_prediction_db",
    "se_direct_db",
    "gap_db",
    "alpha1",
    "abar1",
    "gamma1",
    "gbar1",
    "var_ratio_p",
    "kurtosis_p",
    "var_ratio_q",
    "kurtosis_q",
    "clamped_flag",
)

# seeds shared by all trials live past any trial index
SHARED_STREAM = 2**32


@dataclass
class SeContext:
    x0: np.ndarray
    denoiser: DenoiserSpec
    spectrum: Spectrum
    se: SeTrajectory


def _trial_operator(config: ScenarioConfig, cell_seed: int):
    n = config.n
    return measurement_operator(
        config, n, measurement_count(n, config.rate), config.operator.cond, derive_seed(cell_seed, OPERATOR_STREAM)
    )


def cells(config: ScenarioConfig) -> List[Cell]:
    return grid_cells(config, {})


def prepare(config: ScenarioConfig) -> SeContext:
    truth_seed = derive_seed(config.master_seed, SHARED_STREAM)
    x0 = draw_truth(config, truth_seed)
    denoiser = make_denoiser(config, x0.size)

    first = cells(config)[0]
    operator = _trial_operator(config, first.seed)
    problem = build_problem(config, x0, operator, first.seed)
    if config.operator.kind == OperatorChoice.IID_GAUSSIAN:
        logger.info("ℹ️  i.i.d. operator: SE uses the spectrum of the first trial")

    if config.vamp.init_mode == InitMode.SE_ORACLE:
        tau10 = config.vamp.tau10
    else:
        tau10 = float(np.mean(x0**2))
    run_config = vamp_config(config, first.seed)
    se = se_run(
        denoiser,
        x0,
        operator.spectrum,
        gamma_w=problem.gamma_w,
        gamma_w0=problem.gamma_w0,
        tau10=tau10,
        gbar10=run_config.initial_gamma(),
        iterations=config.iterations,
        mc_trials=config.state_evolution.mc_trials,
        seed=derive_seed(config.master_seed, SHARED_STREAM, 1),
    )
    return SeContext(x0=x0, denoiser=denoiser, spectrum=operator.spectrum, se=se)


def shared_se(context: SeContext) -> List[Dict[str, Any]]:
    return context.se.rows()


def run_cell(config: ScenarioConfig, cell: Cell, context: SeContext, out_dir: Path) -> CellResult:
    result = CellResult(cell=cell)
    operator = _trial_operator(config, cell.seed)
    problem = build_problem(config, context.x0, operator, cell.seed)
    trajectory = result.timed("vamp", lambda: vamp_run(problem, context.denoiser, vamp_config(config, cell.seed)))

    diagnostics = gaussianity_diagnostics(trajectory, problem, context.se)
    se_states = context.se.states
    for state, mse1 in zip(trajectory.states, trajectory.mse1()):
        row: Dict[str, Any] = {
            "trial": cell.trial,
            "seed": cell.seed,
            "k": state.k,
            "mse1_db": to_db(mse1),
            "alpha1": state.alpha1,
            "gamma1": state.gamma1,
            "clamped_flag": state.clamped,
        }
        if state.k < len(se_states):
            predicted: Optional[float] = to_db(se_states[state.k].mse1)
            gauss = diagnostics.rows[state.k]
            row.update(
                se_prediction_db=predicted,
                se_direct_db=to_db(se_states[state.k].e1_direct),
                gap_db=row["mse1_db"] - predicted,
                abar1=se_states[state.k].abar1,
                gbar1=se_states[state.k].gbar1,
                var_ratio_p=gauss.ratio_p,
                kurtosis_p=gauss.p.excess_kurtosis,
                var_ratio_q=gauss.ratio_q,
                kurtosis_q=gauss.q.excess_kurtosis,
            )
        result.results.append(row)
    return result


PLAN = ScenarioPlan(
    result_columns=RESULT_COLUMNS,
    se_columns=SE_COLUMNS,
    cells=cells,
    run_cell=run_cell,
    prepare=prepare,
    shared_se=shared_se,
)
