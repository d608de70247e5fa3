import argparse

import numpy as np
import structlog

from sschain.cli import flags
from sschain.cli.io import write_csv
from sschain.cli.schemas import DensityConfig
from sschain.core.exceptions import EXIT_OK, BadRangeError
from sschain.engine.continuum import constant_C, oscillator_density

logger = structlog.get_logger(__name__)

NAME = "density"
CONFIG = DensityConfig


def register(subparsers) -> argparse.ArgumentParser:
    parser = subparsers.add_parser(NAME, help="low-frequency oscillator density rho(omega) to CSV")
    flags.add_continuum(parser)
    parser.add_argument("--omega-min", type=float, default=flags.SUPPRESS)
    parser.add_argument("--omega-max", type=float, default=flags.SUPPRESS)
    parser.add_argument("--samples", type=int, default=flags.SUPPRESS)
    flags.add_out(parser, "CSV")
    return parser


def run(config: DensityConfig) -> int:
    cp = config.continuum_params()
    if not 0.0 <= config.omega_min < config.omega_max:
        raise BadRangeError(f"need 0 <= omega_min < omega_max, got [{config.omega_min}, {config.omega_max}]")
    if config.samples < 2:
        raise BadRangeError(f"need at least 2 samples, got {config.samples}")

    C = constant_C(cp.delta, config.budget())
    omega = np.linspace(config.omega_min, config.omega_max, config.samples)
    rho = oscillator_density(cp, omega, C)
    write_csv(config.out, ["omega", "rho"], [omega, rho])
    logger.info("Density written", out=config.out, exponent=2.0 / cp.delta - 1.0)
    return EXIT_OK
