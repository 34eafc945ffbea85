# app.py (place at project root)
"""
Entry point for catsim.

    catsim <scenario> [--config FILE] [--param KEY=VALUE]... [--out DIR] [--debug]

Each invocation runs one scenario, writes its tables and run_metadata.json
into the output directory and returns the exit status described in
src/cli/runner.py.
"""

import argparse
import os
import sys

from src.cli.runner import GUARD_ERRORS, parse_config, run
from src.core.errors import ConfigError
from src.main.config import load_config
from src.main.constants import APP_NAME, EXIT_GUARD, SCENARIOS, VERSION
from src.main.logger import logger, setup_logging


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog=APP_NAME,
        description="Cat-state generation in a BEC optomechanical cavity: scenario runner.",
    )
    parser.add_argument("scenario", choices=SCENARIOS, help="Scenario to run")
    parser.add_argument("--config", "-c", help="JSON scenario configuration (or an earlier run_metadata.json)")
    parser.add_argument("--param", "-p", action="append", default=[], metavar="KEY=VALUE",
                        help="Override one configuration key; may be repeated")
    parser.add_argument("--out", "-o", help="Output directory (overrides config and CATSIM_OUTPUT_DIR)")
    parser.add_argument("--debug", action="store_true", help="Enable debug logging")
    parser.add_argument("--version", action="version", version=f"%(prog)s {VERSION}")
    return parser


def main(argv=None):
    args = build_parser().parse_args(sys.argv[1:] if argv is None else argv)

    # ensure project root is on sys.path (helps in some environments)
    PROJECT_ROOT = os.path.abspath(os.path.dirname(__file__))
    if PROJECT_ROOT not in sys.path:
        sys.path.insert(0, PROJECT_ROOT)

    try:
        settings = load_config()
    except ConfigError as exc:
        setup_logging(debug=args.debug)
        logger.error("Invalid settings: %s", exc)
        return EXIT_GUARD

    setup_logging(debug=args.debug, level=None if args.debug else settings.get("log_level"))
    logger.info("Starting %s %s", APP_NAME, VERSION)

    try:
        cfg = parse_config(path=args.config, params=args.param, scenario=args.scenario,
                           out=args.out, settings=settings)
    except GUARD_ERRORS as exc:
        logger.error("Configuration rejected: %s", exc)
        return EXIT_GUARD

    status = run(cfg, settings)
    logger.info("Shutdown complete (exit status %d)", status)
    return status


if __name__ == "__main__":
    raise SystemExit(main())
