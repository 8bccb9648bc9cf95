"""
Run a configured scenario end to end and write its artifacts

    <out>/results.csv   one row per cell (or per cell and iteration)
    <out>/se.csv        state-evolution rows, when the scenario has them
    <out>/runtime.csv   wall-clock per method and cell
    <out>/meta.json     resolved config, master seed and the cell list
"""

import asyncio
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional

from loguru import logger

from batch.batch_processor import BatchProcessor
from config.scenario_config import ScenarioConfig, ScenarioName
from config.settings import settings
from scenarios import gen_recursion, image_pipeline, lifting_sweeps, se_validate, sweeps
from scenarios.common import RUNTIME_COLUMNS, Cell, CellResult, ScenarioPlan
from utils.constants import META_JSON, RESULTS_CSV, RUNTIME_CSV, SE_CSV
from utils.csv_writer import write_csv
from utils.exceptions import ConfigError, PnpVampError, ScenarioError

SCENARIOS: Dict[ScenarioName, ScenarioPlan] = {
    ScenarioName.SE_VALIDATE: se_validate.PLAN,
    ScenarioName.IMAGE_RECOVERY: image_pipeline.PLAN,
    ScenarioName.COND_SWEEP: sweeps.COND_PLAN,
    ScenarioName.RATE_SWEEP: sweeps.RATE_PLAN,
    ScenarioName.CSMU_SWEEP: lifting_sweeps.CSMU_PLAN,
    ScenarioName.CSMU_COND_SWEEP: lifting_sweeps.CSMU_COND_PLAN,
    ScenarioName.SELFCAL_GRID: lifting_sweeps.SELFCAL_PLAN,
    ScenarioName.GEN_RECURSION_CHECK: gen_recursion.PLAN,
}


@dataclass
class ScenarioRun:
    """What run_scenario wrote"""

    scenario: ScenarioName
    out_dir: Path
    cells: int
    results: List[Dict[str, Any]] = field(default_factory=list)
    se: List[Dict[str, Any]] = field(default_factory=list)
    files: Dict[str, Path] = field(default_factory=dict)


def resolve_output_dir(config: ScenarioConfig, out_dir: Optional[Path] = None) -> Path:
    """--out, then config.output_dir, then <output_root>/<scenario>/seed<master_seed>"""
    if out_dir is not None:
        return Path(out_dir)
    if config.output_dir:
        return Path(config.output_dir)
    return Path(settings.output_root) / config.scenario.value / f"seed{config.master_seed}"


def _prepare_output(path: Path) -> Path:
    try:
        path.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        raise ScenarioError(f"output directory {path} is not writable: {e}", scenario="output") from e
    return path


def _run_cells(
    config: ScenarioConfig, plan: ScenarioPlan, cells: List[Cell], context: Any, out_dir: Path, threads: int
) -> List[CellResult]:
    processor: BatchProcessor[Cell, CellResult] = BatchProcessor(max_concurrent=threads, fail_fast=True)
    jobs = asyncio.run(
        processor.process_batch(
            cells,
            lambda cell: plan.run_cell(config, cell, context, out_dir),
            batch_name=config.scenario.value,
        )
    )
    for job in jobs:
        if job.error is not None:
            error = job.error
            raise ScenarioError(str(error), scenario=config.scenario.value, coordinates=job.payload.describe()) from error
    return [job.result for job in jobs]


def run_scenario(
    config: ScenarioConfig,
    out_dir: Optional[Path] = None,
    seed: Optional[int] = None,
    threads: Optional[int] = None,
) -> ScenarioRun:
    """
    Execute every cell of the configured scenario and write its CSVs

    Args:
        config: Parsed experiment config
        out_dir: Overrides config.output_dir
        seed: Overrides config.master_seed
        threads: Overrides config.threads / settings.default_threads

    Returns:
        ScenarioRun with the rows and the paths written

    Raises:
        ConfigError: unknown scenario
        ScenarioError: unwritable output, or a cell failed (coordinates attached)
    """
    if seed is not None:
        config = config.model_copy(update={"master_seed": seed})
    plan = SCENARIOS.get(config.scenario)
    if plan is None:
        raise ConfigError(f"unknown scenario: {config.scenario}")
    threads = threads or config.threads or settings.default_threads
    path = _prepare_output(resolve_output_dir(config, out_dir))

    cells = plan.cells(config)
    logger.info(f"🚀 {config.scenario.value}: {len(cells)} cells, master seed {config.master_seed}, {threads} thread(s)")

    try:
        context = plan.prepare(config) if plan.prepare else None
    except PnpVampError as e:
        raise ScenarioError(str(e), scenario=config.scenario.value, coordinates={"stage": "prepare"}) from e
    outcomes = _run_cells(config, plan, cells, context, path, threads)

    run = ScenarioRun(scenario=config.scenario, out_dir=path, cells=len(cells))
    for outcome in outcomes:
        run.results.extend(outcome.results)
    if plan.shared_se is not None:
        run.se.extend(plan.shared_se(context))
    for outcome in outcomes:
        run.se.extend(outcome.se)

    run.files["results"] = path / RESULTS_CSV
    write_csv(run.files["results"], plan.result_columns, run.results)
    if plan.se_columns is not None:
        run.files["se"] = path / SE_CSV
        write_csv(run.files["se"], plan.se_columns, run.se)
    run.files["runtime"] = path / RUNTIME_CSV
    write_csv(run.files["runtime"], RUNTIME_COLUMNS, (row for outcome in outcomes for row in outcome.runtime))

    run.files["meta"] = path / META_JSON
    meta = {
        "scenario": config.scenario.value,
        "master_seed": config.master_seed,
        "config": config.resolved(),
        "cells": [cell.describe() for cell in cells],
    }
    with open(run.files["meta"], "w", encoding="utf-8") as f:
        json.dump(meta, f, indent=2, sort_keys=True, default=str)
        f.write("\n")

    logger.info(f"💾 {len(run.results)} result rows written to {path}")
    return run
