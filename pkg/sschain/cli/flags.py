"""
Shared argparse flags

Every flag defaults to SUPPRESS so that only flags given on the command line
override values from --config.
"""

import argparse

from sschain.engine.wm_dispersion import Spacing

SUPPRESS = argparse.SUPPRESS


def add_tolerance(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--tol", type=float, default=SUPPRESS, help="absolute and relative tolerance")


def add_chain(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--N", type=float, default=SUPPRESS, help="scaling ratio N > 1")
    parser.add_argument("--delta", type=float, default=SUPPRESS, help="exponent, 0 < delta < 2")
    parser.add_argument("--h", type=float, default=SUPPRESS, help="length scale h > 0")
    add_tolerance(parser)


def add_sampling(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--kh-min", type=float, default=SUPPRESS)
    parser.add_argument("--kh-max", type=float, default=SUPPRESS)
    parser.add_argument("--samples", type=int, default=SUPPRESS)
    parser.add_argument("--spacing", choices=[s.value for s in Spacing], default=SUPPRESS)


def add_continuum(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--delta", type=float, default=SUPPRESS, help="exponent, 0 < delta < 2")
    parser.add_argument("--h", type=float, default=SUPPRESS)
    parser.add_argument("--epsilon", type=float, default=SUPPRESS, help="ln N, at most 0.1")
    add_tolerance(parser)


def add_out(parser: argparse.ArgumentParser, what: str) -> None:
    parser.add_argument("--out", default=SUPPRESS, help=f"{what} path, '-' for stdout")
