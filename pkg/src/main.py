#!/usr/bin/env python3
"""
RZF-SKETCH - Command-line Entry Point

Runs one experiment scenario and writes its trial-level CSV, summary CSV and
metadata sidecar.

Usage:
    rzf-sketch sampling-compare --config cfg.json --out results/compare.csv
    rzf-sketch bench --out results/bench.csv --seed 7
"""

import argparse
import logging
import sys
import time
from typing import Any, Dict, List, Optional

from . import __version__
from .exceptions import ConfigValidationError
from .models.experiment_model import ExperimentConfig, Scenario
from .services.experiment_service import ExperimentService
from .utils.error_handler import EXIT_OK, ErrorHandler
from .utils.helpers import format_duration
from .utils.logging_config import log_function_call, log_run_event, setup_logging

COMMANDS: Dict[str, Scenario] = {
    "sampling-compare": Scenario.SAMPLING_COMPARE,
    "snr-sweep": Scenario.SNR_SWEEP,
    "convergence": Scenario.CONVERGENCE,
    "sumrate-convergence": Scenario.SUMRATE_CONVERGENCE,
    "bench": Scenario.BENCH,
}


def build_parser() -> argparse.ArgumentParser:
    """
    Build the argument parser with one subcommand per scenario.

    Returns:
        argparse.ArgumentParser: Configured parser
    """
    parser = argparse.ArgumentParser(
        prog="rzf-sketch",
        description="Sketched RZF beamforming experiments",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON experiment configuration (default: desk preset)")
    common.add_argument("--out", help="Trial-level CSV destination")
    common.add_argument("--seed", type=int, help="Override the master seed")
    common.add_argument("--trials", type=int, help="Override the number of trials")
    common.add_argument("--workers", type=int, help="Threads running trials concurrently")
    common.add_argument(
        "--log-level",
        default="INFO",
        choices=["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"],
        help="Logging level",
    )
    common.add_argument("--log-dir", help="Directory for log files (default: ./logs)")
    common.add_argument("--verbose", action="store_true", help="Also log to the console")

    subparsers = parser.add_subparsers(dest="command", required=True)
    for name, scenario in COMMANDS.items():
        subparsers.add_parser(name, parents=[common], help=f"Run the {scenario.value} scenario")
    return parser


@log_function_call
def load_config(args: argparse.Namespace) -> ExperimentConfig:
    """
    Resolve the configuration for a parsed command line.

    The subcommand fixes the scenario; ``--seed``, ``--trials``, ``--workers``
    and ``--out`` override the file values.

    Raises:
        ConfigFileError: If the configuration file cannot be read
        ConfigValidationError: If the resulting configuration is invalid
    """
    scenario = COMMANDS[args.command]
    if args.config:
        data = ExperimentConfig.load(args.config).to_dict()
    else:
        data = ExperimentConfig.desk_preset(scenario).to_dict()

    overrides: Dict[str, Any] = {"scenario": scenario.value}
    for option, field in (
        ("seed", "master_seed"),
        ("trials", "trials"),
        ("workers", "workers"),
        ("out", "output_path"),
    ):
        value = getattr(args, option)
        if value is not None:
            overrides[field] = value
    cfg = ExperimentConfig.from_dict({**data, **overrides})
    if cfg.output_path is None:
        raise ConfigValidationError(
            "no output path: pass --out or set output_path", field="output_path"
        )
    return cfg


def main(argv: Optional[List[str]] = None) -> int:
    """
    Main command-line entry point.

    Returns:
        int: Exit code
    """
    args = build_parser().parse_args(argv)
    setup_logging(log_level=args.log_level, log_dir=args.log_dir, console=args.verbose)
    logger = logging.getLogger(__name__)
    error_handler = ErrorHandler()

    try:
        cfg = load_config(args)
        logger.info(
            "Running %s with master seed %d over %d trial(s)",
            cfg.scenario.value,
            cfg.master_seed,
            cfg.trials,
        )
        start = time.perf_counter()
        service = ExperimentService()
        frame = service.run(cfg)
        written = service.write_results(frame, cfg)
        logger.info("Finished in %s", format_duration(time.perf_counter() - start))
        for name, path in written.items():
            print(f"{name}: {path}")
        return EXIT_OK

    except Exception as e:
        code = error_handler.handle_error(e, f"rzf-sketch {args.command}")
        summary = error_handler.get_error_summary(e)
        summary.pop("traceback")
        summary["error_message"] = summary.pop("message")
        log_run_event("Run failed", event="run_failed", command=args.command, **summary)
        print(error_handler.create_user_message(e), file=sys.stderr)
        return code


if __name__ == "__main__":
    sys.exit(main())
