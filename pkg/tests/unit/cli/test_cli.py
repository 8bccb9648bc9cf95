"""
Unit tests for the pnpvamp command line
"""

import io

import pytest
from rich.console import Console

from cli.main import EXIT_CONFIG, EXIT_OK, EXIT_RUNTIME, build_parser, main
from cli.run_cli import build_config, summary_table
from cli.validate_cli import validate_command
from config.scenario_config import ScenarioName
from scenarios.runner import ScenarioRun
from utils.constants import RESULTS_CSV

TINY_TOML = """
scenario = "gen-recursion-check"
n = 32
iterations = 2
trials = 1

[state_evolution]
mc_trials = 2

[vamp]
init_mode = "se-oracle"
"""


@pytest.fixture
def console():
    return Console(file=io.StringIO(), width=120)


@pytest.fixture
def tiny_toml(tmp_path):
    path = tmp_path / "tiny.toml"
    path.write_text(TINY_TOML)
    return path


class TestParser:
    """Test suite for argument parsing"""

    def test_run_arguments(self):
        """Test run flags and the hex seed form"""
        args = build_parser().parse_args(["run", "-s", "cond-sweep", "--seed", "0x10", "-t", "2"])
        assert (args.scenario, args.seed, args.threads) == ("cond-sweep", 16, 2)

    @pytest.mark.parametrize(
        "argv",
        [
            ["run", "--seed", "-1"],
            ["run", "--seed", str(2**64)],
            ["run", "--threads", "0"],
            ["run", "--scenario", "nope"],
        ],
    )
    def test_rejects_bad_values(self, argv):
        """Test argparse exits on invalid values"""
        with pytest.raises(SystemExit):
            build_parser().parse_args(argv)


class TestMain:
    """Test suite for main() exit codes"""

    def test_run_ok(self, tiny_toml, tmp_path, console):
        """Test a successful run returns 0 and writes results"""
        out = tmp_path / "out"
        assert main(["run", "--config", str(tiny_toml), "--out", str(out)], console=console) == EXIT_OK
        assert (out / RESULTS_CSV).exists()

    def test_run_needs_scenario_or_config(self, console):
        """Test run without --scenario or --config is a config error"""
        assert main(["run"], console=console) == EXIT_CONFIG

    def test_bad_config_file(self, tmp_path, console):
        """Test an unknown key yields exit code 1"""
        path = tmp_path / "bad.toml"
        path.write_text('scenario = "cond-sweep"\nbogus = 1\n')
        assert main(["validate-config", str(path)], console=console) == EXIT_CONFIG
        assert "Config error" in console.file.getvalue()

    def test_runtime_error(self, tmp_path, console):
        """Test a failing cell yields exit code 2"""
        path = tmp_path / "identity.toml"
        path.write_text('scenario = "cond-sweep"\nn = 16\ntrials = 1\n\n[operator]\nkind = "identity"\nconds = [1.0]\n')
        code = main(["run", "--config", str(path), "--out", str(tmp_path / "o")], console=console)
        assert code == EXIT_RUNTIME

    def test_validate_ok(self, tiny_toml, console):
        """Test validate-config on a good file"""
        assert main(["validate-config", str(tiny_toml)], console=console) == EXIT_OK


class TestCommands:
    """Test suite for the command helpers"""

    def test_scenario_overrides_config(self, tiny_toml):
        """Test --scenario replaces the file's scenario"""
        assert build_config("cond-sweep", tiny_toml).scenario == ScenarioName.COND_SWEEP
        assert build_config("rate-sweep", None).scenario == ScenarioName.RATE_SWEEP

    def test_validate_show(self, tiny_toml, console):
        """Test --show prints the resolved config"""
        config = validate_command(tiny_toml, console=console, show=True)
        assert config.n == 32
        assert "mc_trials" in console.file.getvalue()

    def test_summary_table_truncates(self, tmp_path):
        """Test the summary notes rows beyond the limit"""
        run = ScenarioRun(
            scenario=ScenarioName.COND_SWEEP,
            out_dir=tmp_path,
            cells=1,
            results=[{"k": i, "mse": 0.5} for i in range(5)],
            files={"results": tmp_path / RESULTS_CSV},
        )
        table = summary_table(run, ("k", "mse"), limit=2)
        assert table.row_count == 2
        assert "3 more rows" in table.caption
