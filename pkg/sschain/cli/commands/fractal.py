import argparse

import structlog

from sschain.cli import flags
from sschain.cli.io import write_json
from sschain.cli.schemas import FractalConfig
from sschain.core.exceptions import EXIT_OK
from sschain.engine.fractal_analysis import box_count_dimension, straight_line
from sschain.engine.wm_dispersion import sample_curve

logger = structlog.get_logger(__name__)

NAME = "fractal-dim"
CONFIG = FractalConfig


def register(subparsers) -> argparse.ArgumentParser:
    parser = subparsers.add_parser(NAME, help="box-counting dimension of the dispersion curve")
    flags.add_chain(parser)
    flags.add_sampling(parser)
    parser.add_argument("--scales", type=int, default=flags.SUPPRESS, help="number of dyadic scales")
    parser.add_argument(
        "--selftest", action="store_true", default=flags.SUPPRESS,
        help="measure a straight line instead (expected dimension 1)",
    )
    flags.add_out(parser, "JSON report")
    return parser


def run(config: FractalConfig) -> int:
    if config.selftest:
        curve = straight_line()
        predicted = 1.0
    else:
        params = config.chain_params()
        curve = sample_curve(
            params, config.kh_min, config.kh_max, config.samples, config.spacing, config.budget()
        )
        predicted = 2.0 - params.delta

    estimate = box_count_dimension(curve, config.scales, config.normalize)
    write_json(
        config.out,
        {
            "dimension": estimate.dimension,
            "r2": estimate.r2,
            "predicted": predicted,
            "scales": estimate.scales_used,
            "counts": estimate.counts,
            "out_of_range": estimate.out_of_range,
        },
    )
    logger.info("Fractal dimension written", dimension=estimate.dimension, predicted=predicted)
    return EXIT_OK
