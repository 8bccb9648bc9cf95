"""
Main CLI entry point for pnpvamp

    pnpvamp run --scenario <name> [--config <file>] [--out <dir>] [--seed <u64>] [--threads <n>]
    pnpvamp validate-config <file> [--show]

Exit codes: 0 ok, 1 config error, 2 runtime error
"""

import argparse
import sys
from pathlib import Path
from typing import List, Optional

from pydantic import ValidationError
from rich.console import Console
from rich.panel import Panel

from config.scenario_config import ScenarioName
from utils.exceptions import ConfigError, PnpVampError
from utils.logging_setup import configure_logging

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_RUNTIME = 2


def _seed(value: str) -> int:
    seed = int(value, 0)
    if not 0 <= seed < 2**64:
        raise argparse.ArgumentTypeError(f"seed must be an unsigned 64-bit integer, got {value}")
    return seed


def _positive(value: str) -> int:
    n = int(value)
    if n < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return n


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pnpvamp",
        description="Plug-in denoising VAMP: solvers, state evolution and reproducible experiments",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  pnpvamp run --scenario se-validate --config configs/se_validate.toml --out outputs/se
  pnpvamp run --scenario cond-sweep --seed 7 --threads 4
  pnpvamp validate-config configs/csmu_sweep.toml
        """,
    )
    parser.add_argument("--log-level", default=None, help="Console log level (default: PNPVAMP_LOG_LEVEL)")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="Run one scenario and write its CSVs")
    run.add_argument("--scenario", "-s", choices=[s.value for s in ScenarioName], help="Scenario to run")
    run.add_argument("--config", "-c", type=Path, help="TOML experiment file")
    run.add_argument("--out", "-o", type=Path, help="Output directory")
    run.add_argument("--seed", type=_seed, help="Master seed (overrides the config)")
    run.add_argument("--threads", "-t", type=_positive, help="Worker threads")

    validate = sub.add_parser("validate-config", help="Parse an experiment file strictly")
    validate.add_argument("config", type=Path)
    validate.add_argument("--show", action="store_true", help="Print the resolved config")
    return parser


def _error_panel(console: Console, title: str, error: BaseException) -> None:
    console.print(Panel(str(error), title=title, border_style="red"))


def main(argv: Optional[List[str]] = None, console: Optional[Console] = None) -> int:
    """Main entry point; returns the process exit code"""
    args = build_parser().parse_args(argv)
    configure_logging(args.log_level)
    console = console or Console(stderr=True)

    try:
        if args.command == "run":
            from cli.run_cli import run_command

            if args.scenario is None and args.config is None:
                raise ConfigError("run needs --scenario, --config, or both")
            run_command(args.scenario, args.config, args.out, args.seed, args.threads)
        elif args.command == "validate-config":
            from cli.validate_cli import validate_command

            validate_command(args.config, show=args.show)
    except (ConfigError, ValidationError) as e:
        _error_panel(console, "❌ Config error", e)
        return EXIT_CONFIG
    except (PnpVampError, OSError) as e:
        _error_panel(console, "❌ Runtime error", e)
        return EXIT_RUNTIME
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
