import argparse
import math

import structlog

from sschain.cli import flags
from sschain.cli.io import write_json
from sschain.cli.schemas import ContinuumConfig
from sschain.core.exceptions import EXIT_OK
from sschain.core.params import ChainParams
from sschain.engine.continuum import continuum_constants, continuum_laplacian
from sschain.engine.fields import constant, gaussian, lorentzian
from sschain.engine.selfsim_ops import selfsim_laplacian

logger = structlog.get_logger(__name__)

NAME = "continuum"
CONFIG = ContinuumConfig

FIELDS = {
    "gaussian": gaussian,
    "lorentzian": lorentzian,
    "constant": constant,
}


def register(subparsers) -> argparse.ArgumentParser:
    parser = subparsers.add_parser(NAME, help="compare the series Laplacian with its continuum limit")
    flags.add_continuum(parser)
    parser.add_argument("--field", choices=sorted(FIELDS), default=flags.SUPPRESS)
    parser.add_argument("--x", type=float, default=flags.SUPPRESS, help="evaluation point")
    flags.add_out(parser, "JSON report")
    return parser


def run(config: ContinuumConfig) -> int:
    """Series Laplacian at N = exp(epsilon) against the continuum integral"""
    cp = config.continuum_params()
    tol = config.budget()
    u = FIELDS[config.field]()

    params = ChainParams(N=math.exp(cp.epsilon), delta=cp.delta, h=cp.h)
    series = selfsim_laplacian(u, params, config.x, tol)
    approx = continuum_laplacian(u, cp, config.x, tol)
    constants = continuum_constants(cp, tol)

    diff = abs(series.value - approx)
    rel_diff = diff / abs(approx) if approx != 0.0 else diff
    write_json(
        config.out,
        {
            "series_value": series.value,
            "series_err_bound": series.err_bound,
            "continuum_value": approx,
            "rel_diff": rel_diff,
            "C": constants.C,
            "longwave_coeff": constants.power_coeff,
        },
    )
    logger.info("Continuum comparison written", field=config.field, rel_diff=rel_diff)
    return EXIT_OK
