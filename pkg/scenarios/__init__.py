"""
Experiment scenarios: each family defines a ScenarioPlan; runner.run_scenario
executes one and writes its CSV artifacts
"""

from scenarios.runner import SCENARIOS, ScenarioRun, resolve_output_dir, run_scenario
from scenarios.image_pipeline import ImageRecovery, image_pipeline

__all__ = [
    "ImageRecovery",
    "SCENARIOS",
    "ScenarioRun",
    "image_pipeline",
    "resolve_output_dir",
    "run_scenario",
]
