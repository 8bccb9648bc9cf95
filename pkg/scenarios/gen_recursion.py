"""
gen-recursion-check: the generalized two-block recursion, instantiated for
VAMP, against vamp_run itself, and the generalized SE against se_run

Per trial the gaps are max-abs differences of
    p_k  vs  r₁ₖ − x0
    q_k  vs  Vᵀ(r₂ₖ − x0)
and of the precisions and sensitivities. The SE comparison runs once.
"""

from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List

import numpy as np
from loguru import logger

from config.scenario_config import ScenarioConfig
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
from state_evolution.general import general_recursion_run, vamp_recursion_spec, vamp_se_run
from state_evolution.recursion import se_run
from utils.rng import derive_seed

RESULT_COLUMNS = ("trial", "seed", "k", "p_gap", "q_gap", "gamma1_gap", "alpha1_gap", "alpha2_gap")
SE_CHECK_COLUMNS = ("k", "tau1", "tau2", "gbar1", "gbar2", "tau1_gap", "tau2_gap", "gbar1_gap", "abar1_gap")

SHARED_STREAM = 2**32


@dataclass
class SeCheck:
    rows: List[Dict[str, Any]]
    max_gap: float


def _max_abs(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.max(np.abs(np.asarray(a) - np.asarray(b)))) if np.size(a) else 0.0


def _operator(config: ScenarioConfig, n: int, seed: int):
    return measurement_operator(
        config, n, measurement_count(n, config.rate), config.operator.cond, derive_seed(seed, OPERATOR_STREAM)
    )


def cells(config: ScenarioConfig) -> List[Cell]:
    return grid_cells(config, {})


def prepare(config: ScenarioConfig) -> SeCheck:
    seed = derive_seed(config.master_seed, SHARED_STREAM)
    x0 = draw_truth(config, seed)
    denoiser = make_denoiser(config, x0.size)
    problem = build_problem(config, x0, _operator(config, x0.size, seed), seed)
    run_config = vamp_config(config, seed)
    tau10 = config.vamp.tau10 if config.vamp.init_mode == InitMode.SE_ORACLE else float(np.mean(x0**2))
    kwargs = dict(
        gamma_w=problem.gamma_w,
        gamma_w0=problem.gamma_w0,
        tau10=tau10,
        gbar10=run_config.initial_gamma(),
        iterations=config.iterations,
        mc_trials=config.state_evolution.mc_trials,
        seed=derive_seed(seed, 1),
    )
    direct = se_run(denoiser, x0, problem.operator.spectrum, **kwargs)
    general = vamp_se_run(denoiser, x0, problem.operator.spectrum, **kwargs)

    rows: List[Dict[str, Any]] = []
    for a, b in zip(direct.states, general.states):
        rows.append(
            {
                "k": a.k,
                "tau1": a.tau1,
                "tau2": a.tau2,
                "gbar1": a.gbar1,
                "gbar2": a.gbar2,
                "tau1_gap": abs(a.tau1 - b.tau1),
                "tau2_gap": abs(a.tau2 - b.tau2),
                "gbar1_gap": abs(a.gbar1 - b.gbar1),
                "abar1_gap": abs(a.abar1 - b.abar1),
            }
        )
    if len(direct.states) != len(general.states):
        logger.warning(
            f"⚠️  SE lengths differ: direct {len(direct.states)}, generalized {len(general.states)}"
        )
    gaps = [max(r["tau1_gap"], r["tau2_gap"], r["gbar1_gap"], r["abar1_gap"]) for r in rows]
    check = SeCheck(rows=rows, max_gap=max(gaps, default=0.0))
    logger.info(f"SE generalized vs direct: max gap {check.max_gap:.3e}")
    return check


def shared_se(context: SeCheck) -> List[Dict[str, Any]]:
    return context.rows


def run_cell(config: ScenarioConfig, cell: Cell, context: Any, out_dir: Path) -> CellResult:
    result = CellResult(cell=cell)
    x0 = draw_truth(config, cell.seed)
    problem = build_problem(config, x0, _operator(config, x0.size, cell.seed), cell.seed)
    denoiser = make_denoiser(config, x0.size)
    run_config = vamp_config(config, cell.seed)

    trajectory = result.timed("vamp", lambda: vamp_run(problem, denoiser, run_config))
    states = result.timed(
        "general-recursion",
        lambda: general_recursion_run(vamp_recursion_spec(problem, denoiser, run_config), len(trajectory.states)),
    )

    op = problem.operator
    for vamp_state, gen_state in zip(trajectory.states, states):
        result.results.append(
            {
                "trial": cell.trial,
                "seed": cell.seed,
                "k": vamp_state.k,
                "p_gap": _max_abs(gen_state.p, vamp_state.r1 - x0),
                "q_gap": _max_abs(gen_state.q, op.v_adjoint(vamp_state.r2 - x0)),
                "gamma1_gap": abs(gen_state.gamma1 - vamp_state.gamma1),
                "alpha1_gap": abs(gen_state.alpha1 - vamp_state.alpha1),
                "alpha2_gap": abs(gen_state.alpha2 - vamp_state.alpha2),
            }
        )
    return result


PLAN = ScenarioPlan(
    result_columns=RESULT_COLUMNS,
    se_columns=SE_CHECK_COLUMNS,
    cells=cells,
    run_cell=run_cell,
    prepare=prepare,
    shared_se=shared_se,
)
