"""
Certified evaluation of the Weierstrass-Mandelbrot dispersion relation

    omega^2(kh) = 4 * sum_s N^(-delta s) sin^2(kh N^s / 2),   s in Z

Every value comes with an absolute error bound covering the two omitted
tails, terms whose phase is too large to be meaningful, and rounding.
"""

import math
from dataclasses import dataclass
from enum import Enum
from typing import List, Tuple

import numpy as np
import structlog

from sschain.core.config import settings
from sschain.core.exceptions import BadRangeError, BudgetExhaustedError, OutOfDomainError
from sschain.core.params import ChainParams, ToleranceBudget
from sschain.engine.series import EPS, ascending_sum, ordered_map

logger = structlog.get_logger(__name__)

# Upper bound on (rows x window width) materialised at once
_ELEMENT_BUDGET = 4_000_000


class Spacing(str, Enum):
    LINEAR = "linear"
    LOG = "log"


@dataclass(frozen=True)
class TruncationWindow:
    s_minus: int
    s_plus: int
    tail_bound_lower: float
    tail_bound_upper: float

    @property
    def n_terms(self) -> int:
        return self.s_plus - self.s_minus + 1

    @property
    def tail_bound(self) -> float:
        return self.tail_bound_lower + self.tail_bound_upper

    def indices(self) -> np.ndarray:
        return np.arange(self.s_minus, self.s_plus + 1, dtype=float)


@dataclass(frozen=True)
class DispersionSample:
    kh: float
    omega_sq: float
    err_bound: float


@dataclass(frozen=True)
class DispersionCurve:
    """Samples of omega^2 at strictly increasing kh, stored column-wise"""

    params: ChainParams
    kh: np.ndarray
    omega_sq: np.ndarray
    err_bound: np.ndarray
    spacing: Spacing = Spacing.LINEAR

    def __len__(self) -> int:
        return int(self.kh.size)

    @property
    def samples(self) -> List[DispersionSample]:
        return [
            DispersionSample(float(k), float(w), float(e))
            for k, w, e in zip(self.kh, self.omega_sq, self.err_bound)
        ]


def _require_physical_delta(params: ChainParams) -> None:
    if not 0.0 < params.delta < 2.0:
        raise OutOfDomainError(
            f"dispersion series converges only for 0 < delta < 2, got delta={params.delta}"
        )


def _upper_tail(params: ChainParams, s_plus: np.ndarray) -> np.ndarray:
    # 4 * sum_{s > S+} xi^s
    xi = params.xi
    return 4.0 * np.power(xi, s_plus + 1.0) / (1.0 - xi)


def _lower_tail(params: ChainParams, kh: np.ndarray, s_minus: np.ndarray) -> np.ndarray:
    # sin^2(x) <= x^2:  (kh)^2 * sum_{s <= S-} N^((2 - delta) s)
    p = 2.0 - params.delta
    return kh * kh * np.power(params.N, p * s_minus) / (1.0 - params.N ** (-p))


def _anchor_index(params: ChainParams, kh: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Index s* with kh N^s* in (pi/N, pi] and a certified lower bound on omega^2"""
    log_n = math.log(params.N)
    s_star = np.floor(np.log(np.pi / kh) / log_n)
    x = kh * np.power(params.N, s_star)
    lower = 4.0 * np.power(params.N, -params.delta * s_star) * np.sin(0.5 * x) ** 2
    return s_star, lower * (1.0 - 8.0 * EPS)


def _window_arrays(params: ChainParams, kh: np.ndarray, tol: ToleranceBudget):
    """Vectorised window choice; kh must be non-negative"""
    n = kh.size
    s_minus = np.zeros(n)
    s_plus = np.zeros(n)
    lower = np.zeros(n)
    upper = np.zeros(n)
    live = kh > 0.0
    if not np.any(live):
        return s_minus, s_plus, lower, upper

    k = kh[live]
    log_n = math.log(params.N)
    p = 2.0 - params.delta
    xi = params.xi
    q = params.N ** (-p)

    s_star, omega_floor = _anchor_index(params, k)
    half = 0.5 * np.maximum(tol.abs_tol, tol.rel_tol * omega_floor)

    sp = np.ceil(np.log(half * (1.0 - xi) / 4.0) / math.log(xi)) - 1.0
    sp = np.maximum(sp, np.maximum(s_star, 0.0))
    sm = np.floor(np.log(half * (1.0 - q) / (k * k)) / (p * log_n))
    sm = np.minimum(sm, np.minimum(s_star, 0.0))

    # guard the closed-form choice against rounding in the logarithms
    for _ in range(3):
        sp = np.where(_upper_tail(params, sp) > half, sp + 1.0, sp)
        sm = np.where(_lower_tail(params, k, sm) > half, sm - 1.0, sm)

    width = sp - sm + 1.0
    if np.any(width > tol.max_terms):
        worst = float(np.max(width))
        logger.error("Dispersion window exceeds budget", terms=worst, max_terms=tol.max_terms)
        raise BudgetExhaustedError(
            f"truncation window needs {worst:.0f} terms, budget allows {tol.max_terms}"
        )

    s_minus[live] = sm
    s_plus[live] = sp
    lower[live] = _lower_tail(params, k, sm)
    upper[live] = _upper_tail(params, sp)
    return s_minus, s_plus, lower, upper


def choose_window(params: ChainParams, kh: float, tol: ToleranceBudget) -> TruncationWindow:
    """Smallest window whose certified tails fit the tolerance"""
    _require_physical_delta(params)
    if not math.isfinite(kh):
        raise BadRangeError(f"kh must be finite, got {kh}")
    sm, sp, lo, up = _window_arrays(params, np.array([abs(kh)]), tol)
    window = TruncationWindow(int(sm[0]), int(sp[0]), float(lo[0]), float(up[0]))
    logger.debug(
        "Dispersion window",
        kh=kh, s_minus=window.s_minus, s_plus=window.s_plus, tail=window.tail_bound,
    )
    return window


def _sum_block(params: ChainParams, kh: np.ndarray, sm: np.ndarray, sp: np.ndarray):
    """Partial sums over per-row windows [sm, sp], ascending in s"""
    s = np.arange(sm.min(), sp.max() + 1.0)
    weight = np.power(params.N, -params.delta * s)
    arg = kh[:, None] * np.power(params.N, s)[None, :]
    inside = (s[None, :] >= sm[:, None]) & (s[None, :] <= sp[:, None])
    bound_only = inside & (arg > settings.BOUND_ONLY_ARG)
    computed = inside & ~bound_only

    terms = np.where(computed, 4.0 * weight * np.sin(0.5 * arg) ** 2, 0.0)
    values = ascending_sum(terms, axis=1)

    skipped = ascending_sum(np.where(bound_only, 4.0 * weight, 0.0), axis=1)
    phase = 4.0 * EPS * ascending_sum(np.where(computed, weight * arg, 0.0), axis=1)
    n_terms = sp - sm + 1.0
    rounding = (n_terms + 4.0) * EPS * values
    return values, skipped + phase + rounding


def omega_sq_many(
    params: ChainParams, kh: np.ndarray, tol: ToleranceBudget
) -> Tuple[np.ndarray, np.ndarray]:
    """omega^2 and error bounds for an array of kh, each certified on its own window.

    Results are bit-identical to one `omega_sq` call per element.
    """
    _require_physical_delta(params)
    kh_abs = np.abs(np.asarray(kh, dtype=float)).ravel()
    if not np.all(np.isfinite(kh_abs)):
        raise BadRangeError("kh must be finite")

    sm, sp, lower, upper = _window_arrays(params, kh_abs, tol)
    if kh_abs.size == 0:
        return kh_abs.copy(), kh_abs.copy()

    full_width = float(sp.max() - sm.min() + 1.0)
    rows = int(max(1, min(settings.SAMPLE_CHUNK, _ELEMENT_BUDGET // full_width)))
    blocks = [slice(i, min(i + rows, kh_abs.size)) for i in range(0, kh_abs.size, rows)]

    results = ordered_map(lambda b: _sum_block(params, kh_abs[b], sm[b], sp[b]), blocks)
    values = np.concatenate([r[0] for r in results])
    bounds = np.concatenate([r[1] for r in results]) + lower + upper
    return values, bounds


def omega_sq(params: ChainParams, kh: float, tol: ToleranceBudget) -> DispersionSample:
    """omega^2(kh) with certified truncation error; even in kh"""
    try:
        values, bounds = omega_sq_many(params, np.array([kh], dtype=float), tol)
    except (BudgetExhaustedError, OutOfDomainError, BadRangeError) as e:
        logger.error(f"omega_sq failed at kh={kh}: {e}")
        raise
    return DispersionSample(kh=float(kh), omega_sq=float(values[0]), err_bound=float(bounds[0]))


def sample_curve(
    params: ChainParams,
    kh_min: float,
    kh_max: float,
    n: int,
    spacing: Spacing,
    tol: ToleranceBudget,
) -> DispersionCurve:
    """Sample the dispersion relation on a linear or logarithmic grid"""
    spacing = Spacing(spacing)
    if not (math.isfinite(kh_min) and math.isfinite(kh_max)) or not 0.0 <= kh_min < kh_max:
        raise BadRangeError(f"need 0 <= kh_min < kh_max, got [{kh_min}, {kh_max}]")
    if n < 2:
        raise BadRangeError(f"need at least 2 samples, got {n}")
    if spacing is Spacing.LOG and kh_min <= 0.0:
        raise BadRangeError("log spacing requires kh_min > 0")

    if spacing is Spacing.LOG:
        kh = np.geomspace(kh_min, kh_max, n)
    else:
        kh = np.linspace(kh_min, kh_max, n)

    values, bounds = omega_sq_many(params, kh, tol)
    logger.info(
        "Sampled dispersion curve",
        N=params.N, delta=params.delta, samples=n, spacing=spacing.value,
        max_err=float(bounds.max()),
    )
    return DispersionCurve(params=params, kh=kh, omega_sq=values, err_bound=bounds, spacing=spacing)


def scaling_residual(params: ChainParams, kh: float, tol: ToleranceBudget) -> float:
    """|omega^2(N kh) - N^delta omega^2(kh)|; exact identity of the series"""
    base = omega_sq(params, kh, tol)
    scaled = omega_sq(params, params.N * kh, tol)
    return abs(scaled.omega_sq - params.lam * base.omega_sq)


def scaling_bound(params: ChainParams, kh: float, tol: ToleranceBudget) -> float:
    """(1 + N^delta) times the combined error bounds of the two evaluations"""
    base = omega_sq(params, kh, tol)
    scaled = omega_sq(params, params.N * kh, tol)
    return (1.0 + params.lam) * (base.err_bound + scaled.err_bound)
