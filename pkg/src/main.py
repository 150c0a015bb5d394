import argparse
import json
import logging
import sys
from pathlib import Path
from typing import List, Optional
from .exceptions import ConfigError, NumericalContractError, ValidationError
from .models.run_config import FORMATS, MODES, RunConfig
from .runners.modes import RUNNERS
from .utils.config import Config
from .utils.logging import LogManager
from .utils.validators import InputValidator

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_NUMERICAL = 2


def parse_config(text: str) -> RunConfig:
    """Parse and validate a flat JSON run config"""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError(f"run config is not valid JSON: {e}")
    return _validated(raw)


def _validated(raw) -> RunConfig:
    try:
        return InputValidator.validate_run_config(raw)
    except (TypeError, ValueError) as e:
        raise ValidationError(str(e))


def build_config(args: argparse.Namespace) -> RunConfig:
    """Merge the config file with the subcommand and CLI overrides"""
    raw = {}
    if args.config:
        try:
            raw = json.loads(Path(args.config).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as e:
            raise ConfigError(f"Failed to load {args.config}: {e}")
        if not isinstance(raw, dict):
            raise ValidationError("run config must be a flat JSON object")
    if raw.get("mode", args.mode) != args.mode:
        logger.warning(f"Config mode '{raw['mode']}' overridden by subcommand '{args.mode}'")
    raw["mode"] = args.mode
    overrides = {"dim": args.dim, "seed": args.seed, "format": args.format, "output": args.out}
    raw.update({key: value for key, value in overrides.items() if value is not None})
    return _validated(raw)


def run(config: RunConfig) -> int:
    """Dispatch to the mode runner; returns the process exit code"""
    try:
        Config.ensure_dirs()
        written = RUNNERS[config.mode](config).run()
        for table, path in written.items():
            logger.info(f"{table}: {path}")
        return EXIT_OK
    except (ConfigError, ValidationError) as e:
        logger.error(f"{type(e).__name__}: {e}")
        return EXIT_VALIDATION
    except NumericalContractError as e:
        logger.error(f"{type(e).__name__}: {e}")
        return EXIT_NUMERICAL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ionqubit",
        description="Trapped-ion vibrational qubits without the rotating wave approximation",
    )
    parser.add_argument("mode", choices=MODES, help="protocol to run")
    parser.add_argument("--config", metavar="PATH", help="flat JSON run config")
    parser.add_argument("--out", metavar="PATH", help="output file")
    parser.add_argument("--format", choices=FORMATS, help="output format")
    parser.add_argument("--dim", type=int, help="Fock-space truncation N")
    parser.add_argument("--seed", type=int, help="seed for sampled measurements")
    parser.add_argument("--log-level", default="INFO", help="console log level")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Main application entry point"""
    args = build_parser().parse_args(argv)
    LogManager.setup_logging(args.log_level.upper())
    logger.info(f"Starting '{args.mode}' run")
    try:
        config = build_config(args)
    except (ConfigError, ValidationError) as e:
        logger.error(f"{type(e).__name__}: {e}")
        return EXIT_VALIDATION
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
