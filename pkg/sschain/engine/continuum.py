"""
Continuum approximation of the self-similar chain (N = 1 + epsilon)

Power-law long-wave dispersion, oscillator density, the convolution kernel g,
Riemann-Liouville fractional integrals and the integral form of the Laplacian.
"""

import math
from dataclasses import dataclass
from typing import Callable, Tuple, Union

import numpy as np
import structlog
from pydantic import BaseModel, ConfigDict, field_validator
from scipy import integrate, special

from sschain.core.config import settings
from sschain.core.exceptions import (
    BudgetExhaustedError,
    GammaOverflowError,
    InadmissibleExponentError,
    InvalidParametersError,
    OutOfDomainError,
    SingularPointError,
)
from sschain.core.params import ToleranceBudget, pydantic_messages
from sschain.engine.fields import EvaluableField

logger = structlog.get_logger(__name__)

ArrayLike = Union[float, np.ndarray]

# delta within this distance of 1 uses the logarithmic kernel
_LOG_KERNEL_GAP = 1e-12
# Outer end of the decade panels on [1, inf)
_DECADES = 12
_QUAD_REL = 1e-11
# Relative accuracy required of C
_C_REL = 1e-8


class ContinuumParams(BaseModel):
    model_config = ConfigDict(frozen=True)

    epsilon: float
    delta: float
    h: float = 1.0

    @field_validator("epsilon")
    @classmethod
    def _epsilon_small(cls, v: float) -> float:
        if not 0.0 < v <= settings.EPSILON_MAX:
            raise ValueError(f"epsilon must lie in (0, {settings.EPSILON_MAX}]")
        if v > settings.EPSILON_WARN:
            logger.warning("Continuum approximation is coarse", epsilon=v, warn_above=settings.EPSILON_WARN)
        return v

    @field_validator("delta")
    @classmethod
    def _delta_physical(cls, v: float) -> float:
        if not 0.0 < v < 2.0:
            raise ValueError("δ not in (0,2)")
        return v

    @field_validator("h")
    @classmethod
    def _h_positive(cls, v: float) -> float:
        if not v > 0.0:
            raise ValueError("h must be positive")
        return v

    @classmethod
    def from_n(cls, N: float, delta: float, h: float = 1.0) -> "ContinuumParams":
        """epsilon = ln N"""
        return cls(epsilon=math.log(N), delta=delta, h=h)

    @classmethod
    def checked(cls, **kwargs) -> "ContinuumParams":
        try:
            return cls(**kwargs)
        except ValueError as e:
            raise InvalidParametersError("invalid continuum parameters", pydantic_messages(e)) from e


@dataclass(frozen=True)
class ContinuumConstants:
    C: float
    power_coeff: float
    density_coeff: float


@dataclass(frozen=True)
class LongwaveValue:
    omega_sq: float
    in_regime: bool


@dataclass(frozen=True)
class SampledFunction:
    """Values of v on the uniform grid a = t_0 < ... < t_{n-1} = b"""

    values: np.ndarray
    a: float
    b: float

    @property
    def grid(self) -> np.ndarray:
        return np.linspace(self.a, self.b, self.values.size)

    @classmethod
    def from_callable(cls, fn: Callable[[np.ndarray], np.ndarray], a: float, b: float, n: int):
        t = np.linspace(a, b, n)
        return cls(values=np.asarray(fn(t), dtype=float), a=a, b=b)


def gamma_fn(z: float) -> float:
    """Gamma(z) for z > 0"""
    if not (math.isfinite(z) and z > 0.0):
        raise OutOfDomainError(f"Gamma is defined here for z > 0, got {z}")
    value = float(special.gamma(z))
    if not math.isfinite(value):
        raise GammaOverflowError(f"Gamma({z}) overflows double precision")
    return value


def _quad(fn, a: float, b: float, tol: ToleranceBudget, **kwargs) -> Tuple[float, float]:
    """scipy quad with QUADPACK messages routed to the log instead of warnings"""
    kwargs.setdefault("epsabs", 0.0)
    kwargs.setdefault("epsrel", _QUAD_REL)
    kwargs.setdefault("limit", tol.max_quad_evals)
    if kwargs.get("weight") == "cos" and b == np.inf:
        kwargs.setdefault("limlst", tol.max_quad_evals)
    result = integrate.quad(fn, a, b, full_output=1, **kwargs)
    value, err = float(result[0]), float(result[1])
    if len(result) > 3:
        logger.debug("Quadrature message", a=a, b=b, err=err, message=str(result[3]).partition("\n")[0])
    return value, err


class _Quadrature:
    """Running sum of integral pieces and their QUADPACK error estimates"""

    def __init__(self, tol: ToleranceBudget, what: str):
        self.tol = tol
        self.what = what
        self.value = 0.0
        self.err = 0.0
        self.size = 0.0

    def add(self, fn, a: float, b: float, **kwargs) -> float:
        value, err = _quad(fn, a, b, self.tol, **kwargs)
        self.exact(value)
        self.err += err
        return value

    def exact(self, value: float) -> float:
        self.value += value
        self.size += abs(value)
        return value

    def semi_infinite(self, fn) -> float:
        """int_1^inf fn over decade panels plus an unbounded remainder"""
        total = 0.0
        for j in range(_DECADES):
            total += self.add(fn, 10.0 ** j, 10.0 ** (j + 1))
        return total + self.add(fn, 10.0 ** _DECADES, np.inf)

    def result(self) -> float:
        allowed = max(self.tol.abs_tol, self.tol.rel_tol * self.size)
        if not self.err <= allowed:
            logger.error("Quadrature error above budget", what=self.what, err=self.err, allowed=allowed)
            raise BudgetExhaustedError(
                f"{self.what}: quadrature error estimate {self.err:.3g} exceeds {allowed:.3g}"
            )
        return self.value


def _cos_tail(a: float, tol: ToleranceBudget) -> Tuple[float, float]:
    """int_1^inf cos(t) t^(-a) dt, integrated by parts twice before the Fourier quadrature"""
    b = a + 1.0
    rest, err = _quad(lambda t: t ** (-a - 2.0), 1.0, np.inf, tol, weight="cos", wvar=1.0, epsabs=1e-14)
    value = -math.sin(1.0) + a * math.cos(1.0) - a * b * rest
    return value, a * b * err


def constant_C(delta: float, tol: ToleranceBudget) -> float:
    """C = 2 * int_0^inf (1 - cos t) / t^(1+delta) dt, for 0 < delta < 2"""
    if not 0.0 < delta < 2.0:
        raise OutOfDomainError(f"C exists only for 0 < delta < 2, got {delta}")

    # (0, 1]: (1 - cos t)/t^2 is smooth, the t^(1-delta) factor goes into the weight
    near, err_near = _quad(
        lambda t: 0.5 * np.sinc(t / (2.0 * np.pi)) ** 2, 0.0, 1.0, tol,
        weight="alg", wvar=(1.0 - delta, 0.0),
    )
    # [1, inf): int t^(-1-delta) = 1/delta minus a Fourier integral
    osc, err_osc = _cos_tail(1.0 + delta, tol)
    C = 2.0 * (near + 1.0 / delta - osc)
    err = 2.0 * (err_near + err_osc)
    if not err <= _C_REL * C:
        logger.error("Quadrature error above target", delta=delta, C=C, err=err)
        raise BudgetExhaustedError(f"C({delta}) reached only {err / C:.3g} relative accuracy")
    logger.debug("Constant C", delta=delta, C=C, err=err)
    return C


def continuum_constants(cp: ContinuumParams, tol: ToleranceBudget) -> ContinuumConstants:
    C = constant_C(cp.delta, tol)
    density = 2.0 / (math.pi * cp.delta * cp.h) * (cp.epsilon / C) ** (1.0 / cp.delta)
    return ContinuumConstants(C=C, power_coeff=C / cp.epsilon, density_coeff=density)


def longwave_omega_sq(cp: ContinuumParams, kh: float, C: float) -> LongwaveValue:
    """omega^2 ~ (kh)^delta C / epsilon; in regime while (kh)^delta <= epsilon"""
    if not kh >= 0.0:
        raise OutOfDomainError(f"kh must be non-negative, got {kh}")
    power = kh ** cp.delta
    return LongwaveValue(omega_sq=power * C / cp.epsilon, in_regime=power <= cp.epsilon)


def longwave_frequency(cp: ContinuumParams, kh: float, C: float) -> float:
    return math.sqrt(longwave_omega_sq(cp, kh, C).omega_sq)


def oscillator_density(cp: ContinuumParams, omega: ArrayLike, C: float) -> ArrayLike:
    """rho(omega) = 2/(pi delta h) (epsilon/C)^(1/delta) omega^(2/delta - 1)"""
    w = np.asarray(omega, dtype=float)
    if np.any(w < 0.0):
        raise OutOfDomainError("omega must be non-negative")
    coeff = 2.0 / (math.pi * cp.delta * cp.h) * (cp.epsilon / C) ** (1.0 / cp.delta)
    rho = coeff * np.power(w, 2.0 / cp.delta - 1.0)
    return float(rho) if rho.ndim == 0 else rho


def kernel_g(x: float, cp: ContinuumParams) -> float:
    """Convolution kernel g(|x|) of the continuum Laplacian"""
    r = abs(x)
    if abs(cp.delta - 1.0) < _LOG_KERNEL_GAP:
        if r == 0.0:
            raise SingularPointError("logarithmic kernel is singular at x = 0")
        return -(cp.h / cp.epsilon) * math.log(r)
    if r == 0.0 and cp.delta > 1.0:
        raise SingularPointError(f"kernel |x|^(1-delta) is singular at x = 0 for delta={cp.delta}")
    return cp.h ** cp.delta / (cp.delta * (cp.delta - 1.0) * cp.epsilon) * r ** (1.0 - cp.delta)


def rl_fractional_integral(v: SampledFunction, D: float, x: float) -> float:
    """Riemann-Liouville integral (1/Gamma(D)) int_a^x (x - t)^(D-1) v(t) dt.

    Product integration: v is piecewise linear on the grid and the weight
    (x - t)^(D-1) is integrated exactly on every cell.
    """
    if not D > 0.0:
        raise OutOfDomainError(f"fractional order must be positive, got {D}")
    if not v.a <= x <= v.b:
        raise OutOfDomainError(f"x={x} outside [{v.a}, {v.b}]")
    if x == v.a:
        return 0.0

    t = v.grid
    idx = int(np.searchsorted(t, x, side="left"))
    nodes = np.append(t[:idx], x)
    vals = np.append(v.values[:idx], np.interp(x, t, v.values))

    A = x - nodes[:-1]
    B = x - nodes[1:]
    width = A - B
    AD, BD = A ** D, B ** D
    full = (A * AD - B * BD) / (D + 1.0)
    w_left = (full - B * (AD - BD) / D) / width
    w_right = (A * (AD - BD) / D - full) / width

    total = np.sum(w_left * vals[:-1] + w_right * vals[1:])
    return float(total / gamma_fn(D))


def continuum_laplacian(
    u: EvaluableField, cp: ContinuumParams, x: float, tol: ToleranceBudget
) -> float:
    """(h^delta/epsilon) int_0^inf [u(x-t) + u(x+t) - 2u(x)] / t^(1+delta) dt

    Plane waves get their [1, inf) piece from the Fourier-weighted quadrature;
    any other field is integrated panel by panel and should decay.
    """
    delta = cp.delta
    u0 = float(u(np.array([x]))[0])
    quad = _Quadrature(tol, f"continuum Laplacian of {u.name}")

    def second(t):
        return u(x - t) + u(x + t) - 2.0 * u0

    def kernel_term(t):
        return second(t) * t ** (-1.0 - delta)

    # below tau_c the second difference is t^2 u''(x) to relative O(tau_c^2)
    tau_c = settings.LAPLACIAN_TAU_CUT
    if u.d2 is not None:
        curvature = float(np.asarray(u.d2(np.array([x])), dtype=float)[0])
    else:
        curvature = float(second(np.array([tau_c]))[0]) / (tau_c * tau_c)
    near = quad.exact(curvature * tau_c ** (2.0 - delta) / (2.0 - delta))

    mid = quad.add(kernel_term, tau_c, 1.0)
    if u.wavenumber is not None:
        # u(x - t) + u(x + t) = 2 u(x) cos(k t)
        k = abs(u.wavenumber)
        far = 0.0
        if k > 0.0 and u0 != 0.0:
            far = quad.add(
                lambda t: 2.0 * u0 * t ** (-1.0 - delta), 1.0, np.inf,
                weight="cos", wvar=k, epsabs=1e-14 * abs(u0),
            )
            far += quad.exact(-2.0 * u0 / delta)
    else:
        far = quad.semi_infinite(kernel_term)

    value = cp.h ** delta / cp.epsilon * quad.result()
    logger.debug("Continuum Laplacian", field=u.name, x=x, near=near, mid=mid, far=far, err=quad.err)
    return value


def kernel_laplacian(
    u: EvaluableField, cp: ContinuumParams, x: float, tol: ToleranceBudget
) -> float:
    """int g(|x - t|) u''(t) dt, the kernel-convolution form of the continuum Laplacian"""
    if u.d2 is None:
        raise OutOfDomainError(f"field {u.name} has no second derivative")
    quad = _Quadrature(tol, f"kernel Laplacian of {u.name}")

    def curvature(r):
        r = np.asarray(r, dtype=float)
        return np.asarray(u.d2(x + r), dtype=float) + np.asarray(u.d2(x - r), dtype=float)

    if abs(cp.delta - 1.0) < _LOG_KERNEL_GAP:
        coeff = -cp.h / cp.epsilon
        # (0, 1]: log r goes into the weight
        quad.add(lambda r: coeff * curvature(r), 0.0, 1.0, weight="alg-loga", wvar=(0.0, 0.0))
        quad.semi_infinite(lambda r: coeff * np.log(r) * curvature(r))
    else:
        coeff = cp.h ** cp.delta / (cp.delta * (cp.delta - 1.0) * cp.epsilon)
        # (0, 1]: r^(1-delta) goes into the weight
        quad.add(lambda r: coeff * curvature(r), 0.0, 1.0, weight="alg", wvar=(1.0 - cp.delta, 0.0))
        quad.semi_infinite(lambda r: coeff * r ** (1.0 - cp.delta) * curvature(r))
    return quad.result()


def continuum_transform(
    f: EvaluableField, cp: ContinuumParams, h: float, tol: ToleranceBudget
) -> float:
    """(h^delta/epsilon) int_0^inf f(t) / t^(1+delta) dt; scales as h^delta for every h > 0"""
    window = f.window
    if not window.beta < cp.delta < window.alpha:
        raise InadmissibleExponentError(
            f"delta={cp.delta} outside ({window.beta}, {window.alpha}) for {f.name}"
        )
    quad = _Quadrature(tol, f"continuum transform of {f.name}")

    def integrand(t):
        return f(t) * t ** (-1.0 - cp.delta)

    quad.add(integrand, 0.0, 1.0)
    quad.semi_infinite(integrand)
    return h ** cp.delta / cp.epsilon * quad.result()
