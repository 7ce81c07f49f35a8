"""CLI entry point for optosqueeze.

This module provides the command-line interface for simulating pulses,
running pulse optimizations and studying detection angles. It can be
invoked as `optosqueeze` (via the script entry point) or
`python -m optosqueeze`.

Exit codes: 0 on success, 2 for invalid configuration or unsupported
record files, 3 for numerical failures that end a command.
"""

import argparse
import logging
import sys
from pathlib import Path

from pydantic import ValidationError

from optosqueeze import __version__
from optosqueeze.commands import COMMANDS
from optosqueeze.config import OptoSqueezeSettings
from optosqueeze.exceptions import (
    ConfigError,
    DegenerateProfile,
    EvaluationFailed,
    GainOverflow,
    IllConditioned,
    IntegrationDiverged,
    NonPositiveEigenvalue,
    NotSymmetric,
    RecordVersionError,
)
from optosqueeze.models import load_config

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3

OUTPUTS = """\
outputs (CSV files get a <stem>.meta.json sidecar with config and seed):
  simulate   <name>-simulate.json
  optimize   runs/<name>-seed<k>.jsonl, <name>-summary.json,
             <name>-histogram.csv       bin_lo, bin_hi, count
             <name>-average-pulse.csv   profile, knot, mean, stderr
  noisy      as optimize, plus
             <name>-noise-samples.csv   s_gen_db
             <name>-noise-histogram.csv bin_lo, bin_hi, count
  sweep      runs/<name>-gamma<i>-seed<k>.jsonl,
             <name>-sweep.csv           gamma_heat, best_db, mean_db
             <name>-fixed-pulses.csv    g, tau, gamma_heat, s_gen_db
             <name>-coupling-scan.csv   g, tau, numeric_db, rwa_db
  detect     <name>-detect.json, <name>-landscape-<label>.csv
  landscape  <name>-landscape.csv       theta_c\\theta_m grid of variances
  report     report.csv                 layout, n_runs, min_db, mean_db, max_db
"""

COMMAND_HELP = {
    "simulate": "Propagate the configured pulse and report its squeezing",
    "optimize": "Optimize the configured layout over seeded repeats",
    "sweep": "Optimize across heating rates",
    "noisy": "Optimize under control noise and study robustness",
    "detect": "Search detection angles at thermal and cooled occupation",
    "landscape": "Variance over the detection-angle grid",
    "report": "Aggregate stored runs per layout",
}


def build_parser() -> argparse.ArgumentParser:
    """Argument parser with one subcommand per experiment."""
    parser = argparse.ArgumentParser(
        prog="optosqueeze",
        description="Pulsed two-mode optomechanical squeezing experiments",
        epilog=OUTPUTS,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument(
        "--version",
        action="version",
        version=f"optosqueeze {__version__}",
    )

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--config",
        type=Path,
        default=None,
        help="Experiment configuration (JSON); defaults apply when omitted",
    )
    common.add_argument("--seed", type=int, default=None, help="Base seed")
    common.add_argument("--repeats", type=int, default=None, help="Seeded repeats")
    common.add_argument(
        "--out",
        type=str,
        default=None,
        help="Output directory (default: ., can be set via OPTOSQUEEZE_OUT_DIR)",
    )
    common.add_argument(
        "--override",
        action="append",
        default=[],
        metavar="KEY=VALUE",
        help="Dotted configuration override, e.g. system.n_th=1e8 (repeatable)",
    )
    common.add_argument(
        "--log-level",
        type=str,
        default=None,
        choices=["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"],
        help="Logging level (default: INFO, can be set via OPTOSQUEEZE_LOG_LEVEL)",
    )
    common.add_argument(
        "--workers",
        type=int,
        default=None,
        help="Worker processes for repeats (default: 1, OPTOSQUEEZE_WORKERS)",
    )

    subparsers = parser.add_subparsers(dest="command", required=True)
    for name, help_text in COMMAND_HELP.items():
        subparsers.add_parser(
            name,
            parents=[common],
            help=help_text,
            epilog=OUTPUTS,
            formatter_class=argparse.RawDescriptionHelpFormatter,
        )
    return parser


def main(argv: list[str] | None = None) -> int:
    """Main entry point for the optosqueeze CLI.

    The configuration is loaded and validated before anything is written.

    Returns:
        The process exit code.
    """
    args = build_parser().parse_args(argv)

    overrides = list(args.override)
    if args.seed is not None:
        overrides.append(f"seed={args.seed}")
    if args.repeats is not None:
        overrides.append(f"repeats={args.repeats}")

    try:
        config = load_config(args.config, overrides)

        # Build settings, CLI args override the config file and environment
        settings_kwargs = {}
        if config.out_dir is not None:
            settings_kwargs["out_dir"] = config.out_dir
        if args.out is not None:
            settings_kwargs["out_dir"] = args.out
        if args.log_level is not None:
            settings_kwargs["log_level"] = args.log_level
        if args.workers is not None:
            settings_kwargs["workers"] = args.workers
        settings = OptoSqueezeSettings(**settings_kwargs)
    except (ConfigError, ValidationError) as e:
        print(f"optosqueeze: invalid configuration: {e}", file=sys.stderr)
        return EXIT_CONFIG

    logging.basicConfig(
        level=settings.log_level.upper(),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    logger = logging.getLogger("optosqueeze")
    logger.info(f"Running {args.command} for {config.name} (seed {config.seed})")

    try:
        paths = COMMANDS[args.command](config, settings)
    except (
        ConfigError,
        RecordVersionError,
        DegenerateProfile,
        NotSymmetric,
    ) as e:
        print(f"optosqueeze: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except (
        IntegrationDiverged,
        GainOverflow,
        EvaluationFailed,
        IllConditioned,
        NonPositiveEigenvalue,
    ) as e:
        print(f"optosqueeze: numerical failure: {e}", file=sys.stderr)
        return EXIT_NUMERIC

    for path in paths:
        print(path)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
