"""
`pnpvamp run`: execute one scenario and summarize what it wrote
"""

from pathlib import Path
from typing import Optional

from rich import box
from rich.console import Console
from rich.table import Table

from config.scenario_config import ScenarioConfig, ScenarioName, load_scenario_config
from scenarios.runner import SCENARIOS, ScenarioRun, run_scenario

SUMMARY_ROWS = 20


def build_config(scenario: Optional[str], config_path: Optional[Path]) -> ScenarioConfig:
    """Load the TOML file (or the defaults) and apply --scenario on top"""
    config = load_scenario_config(config_path) if config_path else ScenarioConfig()
    if scenario is not None:
        config = config.model_copy(update={"scenario": ScenarioName(scenario)})
    return config


def summary_table(run: ScenarioRun, columns, limit: int = SUMMARY_ROWS) -> Table:
    table = Table(title=f"{run.scenario.value} → {run.files['results']}", box=box.ROUNDED)
    for column in columns:
        table.add_column(column, overflow="fold")
    for row in run.results[:limit]:
        table.add_row(*(_short(row.get(column)) for column in columns))
    if len(run.results) > limit:
        table.caption = f"{len(run.results) - limit} more rows in results.csv"
    return table


def _short(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return f"{value:.4g}"
    if hasattr(value, "value"):
        return str(value.value)
    return str(value)


def run_command(
    scenario: Optional[str],
    config_path: Optional[Path],
    out_dir: Optional[Path],
    seed: Optional[int],
    threads: Optional[int],
    console: Optional[Console] = None,
) -> ScenarioRun:
    config = build_config(scenario, config_path)
    run = run_scenario(config, out_dir=out_dir, seed=seed, threads=threads)
    console = console or Console()
    console.print(summary_table(run, SCENARIOS[run.scenario].result_columns))
    for name, path in run.files.items():
        console.print(f"[green]✓[/green] {name}: {path}")
    return run
