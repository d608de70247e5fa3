import argparse

import structlog

from sschain.cli import flags
from sschain.cli.io import write_csv
from sschain.cli.schemas import DispersionConfig
from sschain.core.exceptions import EXIT_OK
from sschain.engine.wm_dispersion import sample_curve

logger = structlog.get_logger(__name__)

NAME = "dispersion"
CONFIG = DispersionConfig


def register(subparsers) -> argparse.ArgumentParser:
    parser = subparsers.add_parser(NAME, help="sample omega^2(kh) with error bounds to CSV")
    flags.add_chain(parser)
    flags.add_sampling(parser)
    flags.add_out(parser, "CSV")
    return parser


def run(config: DispersionConfig) -> int:
    """Write `kh,omega_sq,err_bound` rows"""
    params = config.chain_params()
    curve = sample_curve(
        params, config.kh_min, config.kh_max, config.samples, config.spacing, config.budget()
    )
    write_csv(config.out, ["kh", "omega_sq", "err_bound"], [curve.kh, curve.omega_sq, curve.err_bound])
    logger.info("Dispersion written", out=config.out, samples=len(curve))
    return EXIT_OK
