"""
Tiny scenario configs that run in well under a second each
"""

import pytest

from config.scenario_config import parse_scenario_config


@pytest.fixture
def tiny_config():
    def build(scenario, **overrides):
        base = {
            "scenario": scenario,
            "n": 64,
            "rate": 0.5,
            "iterations": 3,
            "trials": 2,
            "master_seed": 5,
            "state_evolution": {"mc_trials": 3},
        }
        for key, value in overrides.items():
            if isinstance(value, dict) and isinstance(base.get(key), dict):
                base[key] = {**base[key], **value}
            else:
                base[key] = value
        return parse_scenario_config(base)

    return build
