"""
Self-similar transform T_N and the self-similar Laplacian in real space

    T_N f(h)        = sum_s xi^s f(N^s h)
    Laplacian u(x)  = sum_s xi^s [u(x + N^s h) + u(x - N^s h) - 2 u(x)]

The doubly infinite sums are grown outward from s = 0 until tail majorants,
built from the declared exponents and sampled edge magnitudes, fit the budget.
"""

import math
from typing import Sequence

import numpy as np
import structlog

from sschain.core.exceptions import BudgetExhaustedError, InadmissibleExponentError, OutOfDomainError
from sschain.core.params import ChainParams, ToleranceBudget, delta_window
from sschain.engine.fields import EvaluableField
from sschain.engine.series import EPS, CertifiedValue, ascending_sum

logger = structlog.get_logger(__name__)

# Multiplier on edge-estimated tail constants
TAIL_SAFETY = 4.0
_FIRST_BLOCK = 8
# Shifts below this use the integral form of the second difference
SMALL_SHIFT = 1e-3

_nodes, _weights = np.polynomial.legendre.leggauss(6)
_GL_NODES = 0.5 * (_nodes + 1.0)
_GL_WEIGHTS = 0.5 * _weights


def affine_apply(f: EvaluableField, params: ChainParams, s: int, h: float) -> float:
    """A_N^s f(h) = f(N^s h)"""
    return float(f(params.N ** s * h))


def affine_operator_function(
    coeffs: Sequence[float], f: EvaluableField, params: ChainParams, h: float
) -> float:
    """sum_s a_s xi^s f(N^s h) for a finite Maclaurin coefficient list"""
    if len(coeffs) == 0:
        return 0.0
    s = np.arange(len(coeffs), dtype=float)
    terms = np.asarray(coeffs, dtype=float) * np.power(params.xi, s) * f(np.power(params.N, s) * h)
    return float(ascending_sum(terms))


def second_difference(u: EvaluableField, x: float, h: float) -> float:
    """u(x+h) + u(x-h) - 2u(x)"""
    vals = u(np.array([x + h, x - h, x]))
    return float(vals[0] + vals[1] - 2.0 * vals[2])


def partial_transform(
    f: EvaluableField, params: ChainParams, h: float, s_minus: int, s_plus: int
) -> float:
    """Uncertified partial sum over the fixed window [s_minus, s_plus]"""
    s = np.arange(s_minus, s_plus + 1, dtype=float)
    return float(ascending_sum(np.power(params.xi, s) * f(np.power(params.N, s) * h)))


def _terms(f: EvaluableField, params: ChainParams, h: float, s: np.ndarray):
    """Weighted terms and the weighted size of what each term combines"""
    weight = np.power(params.xi, s)
    t = np.power(params.N, s) * h
    return weight * f(t), weight * f.size(t)


def _tail(terms: np.ndarray, s: np.ndarray, edge: float, ratio: float) -> float:
    """Geometric majorant beyond `edge` from magnitudes c = |term_s| / ratio^|s - edge|"""
    if terms.size == 0:
        return 0.0
    distance = np.abs(edge - s) + 1.0
    # |term_s| * ratio^distance estimates the first omitted term
    first = np.max(np.abs(terms) * np.power(ratio, distance))
    return float(TAIL_SAFETY * first / (1.0 - ratio))


def selfsim_transform(
    f: EvaluableField, params: ChainParams, h: float, tol: ToleranceBudget
) -> CertifiedValue:
    """T_N f(h) with a tail bound from the declared (alpha, beta) of f"""
    window = f.window
    if not delta_window(window, params):
        raise InadmissibleExponentError(
            f"delta={params.delta} outside ({window.beta}, {window.alpha}) for {f.name}"
        )

    r_up = params.N ** (window.beta - params.delta)
    r_lo = params.N ** (-(window.alpha - params.delta))

    s_lo, s_hi = -_FIRST_BLOCK, _FIRST_BLOCK
    s = np.arange(s_lo, s_hi + 1, dtype=float)
    terms, sizes = _terms(f, params, h, s)

    while True:
        partial = float(ascending_sum(terms))
        # outer half of each side carries the edge samples
        upper_edge = s >= math.ceil(s_hi / 2)
        lower_edge = s <= math.floor(s_lo / 2)
        tail_up = _tail(terms[upper_edge], s[upper_edge], s_hi, r_up)
        tail_lo = _tail(terms[lower_edge], s[lower_edge], s_lo, r_lo)
        half = 0.5 * tol.target(partial)

        grow_up = tail_up > half
        grow_lo = tail_lo > half
        if not (grow_up or grow_lo):
            break

        width = s_hi - s_lo + 1
        if width >= tol.max_terms:
            logger.error(
                "Transform window exceeds budget",
                field=f.name, s_minus=s_lo, s_plus=s_hi, tail_lower=tail_lo, tail_upper=tail_up,
            )
            raise BudgetExhaustedError(
                f"self-similar transform of {f.name} needs more than {tol.max_terms} terms"
            )

        if grow_up:
            step = min(max(_FIRST_BLOCK, s_hi), tol.max_terms - width)
            new_s = np.arange(s_hi + 1, s_hi + step + 1, dtype=float)
            s = np.concatenate([s, new_s])
            new_terms, new_sizes = _terms(f, params, h, new_s)
            terms = np.concatenate([terms, new_terms])
            sizes = np.concatenate([sizes, new_sizes])
            s_hi += step
            width += step
        if grow_lo and width < tol.max_terms:
            step = min(max(_FIRST_BLOCK, -s_lo), tol.max_terms - width)
            new_s = np.arange(s_lo - step, s_lo, dtype=float)
            s = np.concatenate([new_s, s])
            new_terms, new_sizes = _terms(f, params, h, new_s)
            terms = np.concatenate([new_terms, terms])
            sizes = np.concatenate([new_sizes, sizes])
            s_lo -= step

    # summation error plus cancellation inside each evaluation
    rounding = EPS * ((s.size + 4.0) * float(np.sum(np.abs(terms))) + 4.0 * float(np.sum(sizes)))
    logger.debug(
        "Transform window", field=f.name, s_minus=s_lo, s_plus=s_hi,
        tail_lower=tail_lo, tail_upper=tail_up,
    )
    return CertifiedValue(value=partial, err_bound=tail_lo + tail_up + rounding)


def _require_laplacian_delta(u: EvaluableField, params: ChainParams) -> None:
    """0 < delta < 2 is enforced; decay_beta < -1 is not.

    The transform only sees the second-difference field, which is bounded
    (beta = 0) for any bounded u. Plane waves and constants, with
    decay_beta = 0, are the eigenfunctions of the Laplacian and must pass.
    """
    if not 0.0 < params.delta < 2.0:
        raise OutOfDomainError(f"self-similar Laplacian needs 0 < delta < 2, got {params.delta}")
    if u.decay_beta >= -1.0:
        logger.debug("Field is not Fourier transformable", field=u.name, decay_beta=u.decay_beta)


def _second_difference_field(u: EvaluableField, x: float) -> EvaluableField:
    """t -> u(x+t) + u(x-t) - 2u(x).

    Below SMALL_SHIFT, and when u carries d2, the exact form
    int_0^t (t - r) [u''(x+r) + u''(x-r)] dr is used instead.
    """
    u0 = float(u(np.array([x]))[0])

    def direct(t):
        return u(x + t) + u(x - t) - 2.0 * u0

    def direct_size(t):
        return np.abs(u(x + t)) + np.abs(u(x - t)) + 2.0 * abs(u0)

    if u.d2 is None:
        return EvaluableField(
            eval=direct, decay_beta=0.0, smooth_alpha=u.smooth_alpha,
            name=f"d2[{u.name}]", magnitude=direct_size,
        )

    def integral(t):
        r = np.multiply.outer(t, _GL_NODES)
        curvature = u.d2(x + r) + u.d2(x - r)
        return t * t * (((1.0 - _GL_NODES) * curvature) @ _GL_WEIGHTS)

    def combined(t):
        t = np.asarray(t, dtype=float)
        small = np.abs(t) < SMALL_SHIFT
        out = direct(t)
        if np.any(small):
            out[small] = integral(t[small])
        return out

    def combined_size(t):
        t = np.asarray(t, dtype=float)
        return np.where(np.abs(t) < SMALL_SHIFT, np.abs(combined(t)), direct_size(t))

    return EvaluableField(
        eval=combined, decay_beta=0.0, smooth_alpha=u.smooth_alpha,
        d2=None, name=f"d2[{u.name}]", magnitude=combined_size,
    )


def selfsim_laplacian(
    u: EvaluableField, params: ChainParams, x: float, tol: ToleranceBudget
) -> CertifiedValue:
    """Self-similar Laplacian of u at x, i.e. T_N(h) applied to the second difference.

    Bounded fields that do not decay (plane waves, constants) are accepted.
    """
    _require_laplacian_delta(u, params)
    return selfsim_transform(_second_difference_field(u, x), params, params.h, tol)


def laplacian_scaling_check(
    u: EvaluableField, params: ChainParams, x: float, tol: ToleranceBudget
) -> float:
    """|Laplacian with h' = N h  -  N^delta * Laplacian with h| at x"""
    base = selfsim_laplacian(u, params, x, tol)
    scaled = selfsim_laplacian(u, params.with_h(params.N * params.h), x, tol)
    return abs(scaled.value - params.lam * base.value)


def laplacian_scaling_bound(
    u: EvaluableField, params: ChainParams, x: float, tol: ToleranceBudget
) -> float:
    base = selfsim_laplacian(u, params, x, tol)
    scaled = selfsim_laplacian(u, params.with_h(params.N * params.h), x, tol)
    return (1.0 + params.lam) * (base.err_bound + scaled.err_bound)


def elastic_density(
    u: EvaluableField, params: ChainParams, x: float, tol: ToleranceBudget
) -> CertifiedValue:
    """V(x, h) = 1/2 sum_s xi^s [(u(x) - u(x + N^s h))^2 + (u(x) - u(x - N^s h))^2]"""
    _require_laplacian_delta(u, params)
    u0 = float(u(np.array([x]))[0])
    bond = EvaluableField(
        eval=lambda t: 0.5 * ((u0 - u(x + t)) ** 2 + (u0 - u(x - t)) ** 2),
        decay_beta=0.0,
        smooth_alpha=2.0,
        name=f"bond[{u.name}]",
    )
    return selfsim_transform(bond, params, params.h, tol)


def elastic_density_scaling_check(
    u: EvaluableField, params: ChainParams, x: float, tol: ToleranceBudget
) -> float:
    """|V(x, N h) - xi^-1 V(x, h)|"""
    base = elastic_density(u, params, x, tol)
    scaled = elastic_density(u, params.with_h(params.N * params.h), x, tol)
    return abs(scaled.value - base.value / params.xi)
