"""
sschain command-line entry point
"""

import argparse
import json
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

import structlog
from pydantic import ValidationError

from sschain import __version__
from sschain.cli.commands import COMMANDS
from sschain.core.exceptions import EXIT_VALIDATION, InvalidParametersError, SSChainError
from sschain.core.logging import setup_logging
from sschain.core.params import pydantic_messages

logger = structlog.get_logger(__name__)

_GLOBAL_KEYS = {"config", "log_level", "command", "module"}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sschain",
        description="Self-similar chain dynamics: dispersion, fractality, continuum limit, wave simulation",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--config", help="JSON file with flag values (flags override it)")
    parser.add_argument("--log-level", help="override SSCHAIN_LOG_LEVEL")

    subparsers = parser.add_subparsers(dest="command", metavar="command")
    for module in COMMANDS:
        sub = module.register(subparsers)
        sub.set_defaults(module=module)
    return parser


def load_config_file(path: Optional[str]) -> Dict[str, Any]:
    if path is None:
        return {}
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as e:
        raise InvalidParametersError(f"cannot read config file {path}", [str(e)]) from e
    if not isinstance(data, dict):
        raise InvalidParametersError(f"config file {path} must hold a JSON object")
    return {key.replace("-", "_"): value for key, value in data.items()}


def resolve_config(args: argparse.Namespace):
    values = load_config_file(args.config)
    values.update({k: v for k, v in vars(args).items() if k not in _GLOBAL_KEYS})
    try:
        return args.module.CONFIG.model_validate(values)
    except ValidationError as e:
        raise InvalidParametersError(f"invalid {args.command} configuration", pydantic_messages(e)) from e


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    setup_logging(args.log_level)

    if args.command is None:
        parser.print_help(sys.stderr)
        return EXIT_VALIDATION

    try:
        config = resolve_config(args)
        return args.module.run(config)
    except SSChainError as e:
        logger.error("Command failed", command=args.command, error=e.message, exit_code=e.exit_code)
        print(f"sschain {args.command}: {e}", file=sys.stderr)
        return e.exit_code


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
