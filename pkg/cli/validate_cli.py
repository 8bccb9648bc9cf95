"""
`pnpvamp validate-config`: strict parse of an experiment file, nothing run
"""

from pathlib import Path
from typing import Optional

from rich.console import Console
from rich.pretty import Pretty

from config.scenario_config import ScenarioConfig, load_scenario_config


def validate_command(config_path: Path, console: Optional[Console] = None, show: bool = False) -> ScenarioConfig:
    config = load_scenario_config(config_path)
    console = console or Console()
    console.print(f"[green]✓[/green] {config_path} is a valid [bold]{config.scenario.value}[/bold] config")
    if show:
        console.print(Pretty(config.resolved()))
    return config
