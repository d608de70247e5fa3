"""
Box-counting dimension of sampled dispersion curves

The sampled points are joined into a polyline and every box the polyline
passes through is counted, column by column, at dyadic scales. The slope
is fitted on the summed column oscillation of the unsaturated levels.
"""

from dataclasses import dataclass, field
from typing import List, Tuple, Union

import numpy as np
import structlog

from sschain.core.exceptions import BadRangeError, DegenerateCurveError, TooFewSamplesError
from sschain.engine.series import ordered_map
from sschain.engine.wm_dispersion import DispersionCurve

logger = structlog.get_logger(__name__)

MIN_SAMPLES = 2 ** 12
MIN_SCALES = 5
# A level whose count reaches this share of the sample count is saturated
SATURATION = 0.98


@dataclass(frozen=True)
class SampledCurve:
    """A plane curve y(x) sampled at increasing x"""

    x: np.ndarray
    y: np.ndarray
    name: str = "curve"

    def __len__(self) -> int:
        return int(self.x.size)


@dataclass(frozen=True)
class FractalEstimate:
    dimension: float
    r2: float
    scales_used: List[float]
    counts: List[int]
    out_of_range: bool = False
    saturated_levels: List[float] = field(default_factory=list)


Curve = Union[DispersionCurve, SampledCurve]


def _coordinates(curve: Curve) -> Tuple[np.ndarray, np.ndarray]:
    if isinstance(curve, DispersionCurve):
        return np.asarray(curve.kh, dtype=float), np.asarray(curve.omega_sq, dtype=float)
    return np.asarray(curve.x, dtype=float), np.asarray(curve.y, dtype=float)


def _unit_square(x: np.ndarray, y: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    x_span = x[-1] - x[0]
    y_span = y.max() - y.min()
    if not x_span > 0.0 or not y_span > 0.0:
        raise DegenerateCurveError("curve has no extent in x or y")
    return (x - x[0]) / x_span, (y - y.min()) / y_span


def _column_ranges(x: np.ndarray, y: np.ndarray, scale: float) -> Tuple[np.ndarray, np.ndarray]:
    """Lowest and highest polyline value inside each column of width `scale`"""
    n_cols = int(np.ceil(round(1.0 / scale, 12)))
    last = n_cols - 1

    cols = np.minimum(np.floor(x / scale).astype(np.int64), last)
    lo = np.full(n_cols, np.inf)
    hi = np.full(n_cols, -np.inf)
    np.minimum.at(lo, cols, y)
    np.maximum.at(hi, cols, y)

    # the polyline crosses each inner column edge once; both columns see that point
    edges = np.arange(1, n_cols) * scale
    y_edge = np.interp(edges, x, y)
    right = np.arange(1, n_cols)
    for idx in (right, right - 1):
        np.minimum.at(lo, idx, y_edge)
        np.maximum.at(hi, idx, y_edge)
    return lo, hi


def count_boxes(x: np.ndarray, y: np.ndarray, scale: float) -> int:
    """Boxes of side `scale` met by the polyline through (x, y)"""
    lo, hi = _column_ranges(x, y, scale)
    top = max(int(np.ceil(round(float(y.max()) / scale, 12))) - 1, 0)
    row_lo = np.minimum(np.floor(lo / scale), top)
    row_hi = np.minimum(np.floor(hi / scale), top)
    return int(np.sum(row_hi - row_lo + 1.0))


def column_cover(x: np.ndarray, y: np.ndarray, scale: float) -> float:
    """Sum over columns of (highest - lowest) / scale.

    The box count less its floor of one box per column, free of grid offset.
    """
    lo, hi = _column_ranges(x, y, scale)
    return float(np.sum(hi - lo)) / scale


def box_count_dimension(curve: Curve, n_scales: int, normalize: bool = True) -> FractalEstimate:
    """Least-squares slope of log(cover) against log(1/scale).

    Box counts decide which levels are saturated and are reported as they
    are; the slope is fitted on the column cover of the same levels.
    """
    x, y = _coordinates(curve)
    n = x.size
    if n < MIN_SAMPLES:
        raise TooFewSamplesError(f"box counting needs at least {MIN_SAMPLES} samples, got {n}")
    if n_scales < MIN_SCALES:
        raise BadRangeError(f"need at least {MIN_SCALES} scales, got {n_scales}")
    if np.ptp(y) == 0.0:
        raise DegenerateCurveError("constant curve has no box-counting dimension")

    if normalize:
        x, y = _unit_square(x, y)
    elif x.min() < 0.0 or y.min() < 0.0 or x.max() > 1.0 or y.max() > 1.0:
        raise BadRangeError("unnormalized curves must already lie in the unit square")

    scales = [2.0 ** -(j + 2) for j in range(n_scales)]
    counts = ordered_map(lambda s: count_boxes(x, y, s), scales)

    kept_scales, kept_counts, saturated = [], [], []
    for scale, count in zip(scales, counts):
        if count >= SATURATION * n:
            saturated.append(scale)
            continue
        kept_scales.append(scale)
        kept_counts.append(count)
    if saturated:
        logger.warning("Dropped saturated box-count levels", scales=saturated, samples=n)
    if len(kept_scales) < 2:
        raise TooFewSamplesError("fewer than two unsaturated scales remain")

    cover = ordered_map(lambda s: column_cover(x, y, s), kept_scales)
    log_inv = np.log(1.0 / np.asarray(kept_scales))
    log_cover = np.log(np.asarray(cover))
    slope, intercept = np.polyfit(log_inv, log_cover, 1)
    residual = log_cover - (slope * log_inv + intercept)
    spread = np.sum((log_cover - log_cover.mean()) ** 2)
    r2 = 1.0 - float(np.sum(residual ** 2) / spread) if spread > 0.0 else 1.0

    dimension = float(slope)
    out_of_range = not 1.0 <= dimension <= 2.0
    if out_of_range:
        logger.warning("Box-counting dimension outside [1, 2]", dimension=dimension)
    logger.info("Box-counting dimension", dimension=dimension, r2=r2, scales=len(kept_scales))

    return FractalEstimate(
        dimension=dimension,
        r2=max(r2, 0.0),
        scales_used=kept_scales,
        counts=kept_counts,
        out_of_range=out_of_range,
        saturated_levels=saturated,
    )


def weierstrass_curve(H: float, b: float, n: int, terms: int = 30) -> SampledCurve:
    """sum_k b^(-H k) cos(2 pi b^k x) on [0, 1]; graph dimension 2 - H"""
    if not 0.0 < H < 1.0:
        raise BadRangeError(f"H must lie in (0, 1), got {H}")
    if not b > 1.0:
        raise BadRangeError(f"b must exceed 1, got {b}")
    x = np.linspace(0.0, 1.0, n)
    k = np.arange(terms, dtype=float)
    amp = np.power(b, -H * k)
    freq = 2.0 * np.pi * np.power(b, k)
    y = np.cos(np.outer(x, freq)) @ amp
    return SampledCurve(x=x, y=y, name=f"weierstrass(H={H}, b={b})")


def straight_line(n: int = 2 ** 14) -> SampledCurve:
    x = np.linspace(0.0, 1.0, n)
    return SampledCurve(x=x, y=x.copy(), name="line")
