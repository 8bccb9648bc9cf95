"""
Unit tests for run_scenario and the scenario plans
"""

import json

import pytest

from config.scenario_config import ScenarioName
from scenarios.runner import SCENARIOS, resolve_output_dir, run_scenario
from scenarios.sweeps import median_by
from utils.constants import META_JSON, RESULTS_CSV, RUNTIME_CSV, SE_CSV
from utils.csv_writer import read_csv
from utils.exceptions import ScenarioError

LIFTING = {"subspace_dim": 3, "factor_len": 16, "sparsity": 2, "rates": [0.8], "rate": 0.8, "inner_iters": 3}

TINY = {
    "se-validate": {"vamp": {"init_mode": "se-oracle"}},
    "cond-sweep": {"operator": {"conds": [1.0, 10.0]}},
    "rate-sweep": {"rates": [0.5]},
    "image-recovery": {
        "signal": {"kind": "piecewise-image", "side": 16},
        "denoiser": {"kind": "wavelet-soft-threshold"},
        "trials": 1,
    },
    "csmu-sweep": {"lifting": LIFTING, "trials": 1},
    "csmu-cond-sweep": {"lifting": LIFTING, "operator": {"conds": [1.0, 10.0]}, "trials": 1},
    "selfcal-grid": {
        "lifting": {"factor_len": 16, "m": 16, "sparsities": [2], "subspace_dims": [2], "inner_iters": 3},
        "noise": {"snr_db": float("inf")},
        "trials": 1,
    },
    "gen-recursion-check": {"vamp": {"init_mode": "se-oracle"}},
}


def _bytes(path):
    return path.read_bytes()


class TestResolveOutputDir:
    """Test suite for resolve_output_dir"""

    def test_precedence(self, tiny_config, tmp_path):
        """Test --out, then output_dir, then the settings root"""
        config = tiny_config("cond-sweep", output_dir=str(tmp_path / "cfg"))
        assert resolve_output_dir(config, tmp_path / "cli") == tmp_path / "cli"
        assert resolve_output_dir(config) == tmp_path / "cfg"
        fallback = resolve_output_dir(tiny_config("cond-sweep"))
        assert fallback.parts[-2:] == ("cond-sweep", "seed5")


class TestRunScenario:
    """Test suite for run_scenario"""

    def test_every_scenario_registered(self):
        """Test each scenario name has a plan"""
        assert set(SCENARIOS) == set(ScenarioName)

    @pytest.mark.parametrize("name", sorted(TINY))
    def test_writes_artifacts(self, name, tiny_config, output_dir):
        """Test every scenario runs and writes its CSVs and meta.json"""
        config = tiny_config(name, **TINY[name])
        run = run_scenario(config, out_dir=output_dir)
        plan = SCENARIOS[config.scenario]

        rows = read_csv(output_dir / RESULTS_CSV)
        assert rows, "results.csv is empty"
        assert list(rows[0]) == list(plan.result_columns)
        assert len(rows) == len(run.results)
        assert (output_dir / RUNTIME_CSV).exists()
        assert (output_dir / SE_CSV).exists() == (plan.se_columns is not None)

        meta = json.loads((output_dir / META_JSON).read_text())
        assert meta["scenario"] == name
        assert meta["master_seed"] == 5
        assert len(meta["cells"]) == run.cells

    def test_byte_identical_rerun(self, tiny_config, tmp_path):
        """Test two runs with the same seed write identical results and SE files"""
        config = tiny_config("gen-recursion-check", **TINY["gen-recursion-check"])
        first = run_scenario(config, out_dir=tmp_path / "a")
        second = run_scenario(config, out_dir=tmp_path / "b", threads=2)

        for name in ("results", "se", "meta"):
            assert _bytes(first.files[name]) == _bytes(second.files[name])

    def test_seed_override(self, tiny_config, tmp_path):
        """Test the seed argument replaces master_seed"""
        config = tiny_config("cond-sweep", **TINY["cond-sweep"])
        run = run_scenario(config, out_dir=tmp_path / "s", seed=99)
        meta = json.loads(run.files["meta"].read_text())
        assert meta["master_seed"] == 99
        assert _bytes(run.files["results"]) != _bytes(run_scenario(config, out_dir=tmp_path / "t").files["results"])

    def test_gen_recursion_gaps_small(self, tiny_config, output_dir):
        """Test the generalized recursion tracks vamp_run"""
        run = run_scenario(tiny_config("gen-recursion-check", **TINY["gen-recursion-check"]), out_dir=output_dir)
        assert max(row["p_gap"] for row in run.results) < 1e-6
        assert max(row["tau1_gap"] for row in run.se) < 1e-9

    def test_sweep_has_both_methods(self, tiny_config, output_dir):
        """Test cond-sweep rows for VAMP and AMP per cell"""
        run = run_scenario(tiny_config("cond-sweep", **TINY["cond-sweep"]), out_dir=output_dir)
        assert {row["method"] for row in run.results} == {"vamp", "amp"}
        assert set(median_by(run.results, "cond", "iterations_run")) == {1.0, 10.0}

    def test_image_written(self, tiny_config, output_dir):
        """Test image-recovery writes one PGM per route"""
        run_scenario(tiny_config("image-recovery", **TINY["image-recovery"]), out_dir=output_dir)
        assert sorted(p.name for p in output_dir.glob("*.pgm")) == ["direct_recovered.pgm", "wavelet_recovered.pgm"]

    def test_failed_cell_has_coordinates(self, tiny_config, output_dir):
        """Test a cell error surfaces as ScenarioError with its coordinates"""
        config = tiny_config("cond-sweep", operator={"kind": "identity", "conds": [3.0]})
        with pytest.raises(ScenarioError) as info:
            run_scenario(config, out_dir=output_dir)
        assert info.value.coordinates["cond"] == 3.0
        assert info.value.scenario == "cond-sweep"

    def test_unwritable_output(self, tiny_config, tmp_path):
        """Test an output path that is a file"""
        blocker = tmp_path / "file"
        blocker.write_text("x")
        with pytest.raises(ScenarioError):
            run_scenario(tiny_config("cond-sweep"), out_dir=blocker / "sub")
