"""
Wave dynamics of the self-similar chain on a periodic domain

The primary evolver rotates every Fourier mode exactly under its WM
frequency. A velocity-Verlet integrator driven by the truncated real-space
force law is kept alongside to cross-check it.
"""

import math
from dataclasses import dataclass, field, replace
from typing import List, Optional, Tuple

import numpy as np
import structlog

from sschain.core.config import settings
from sschain.core.exceptions import BadRangeError, NonPowerOfTwoError, UnstableTimeStepError
from sschain.core.params import ChainParams, ToleranceBudget
from sschain.engine.fields import EvaluableField
from sschain.engine.series import ascending_sum
from sschain.engine.wm_dispersion import TruncationWindow, choose_window, omega_sq_many

logger = structlog.get_logger(__name__)

MIN_GRID = 8


@dataclass(frozen=True)
class SpectralState:
    L: float
    M: int
    u_hat: np.ndarray
    v_hat: np.ndarray
    t: float
    params: ChainParams
    initial_total: float = 0.0

    @property
    def x(self) -> np.ndarray:
        return np.arange(self.M) * (self.L / self.M)

    @property
    def mode_index(self) -> np.ndarray:
        """Signed mode numbers j in numpy FFT order"""
        return np.fft.fftfreq(self.M, d=1.0 / self.M)

    @property
    def wavenumbers(self) -> np.ndarray:
        return 2.0 * np.pi * self.mode_index / self.L

    def real_space(self) -> Tuple[np.ndarray, np.ndarray]:
        return np.fft.ifft(self.u_hat).real, np.fft.ifft(self.v_hat).real


@dataclass(frozen=True)
class EnergyReport:
    kinetic: float
    elastic: float
    total: float
    drift_rel: float


@dataclass
class Trajectory:
    times: List[float] = field(default_factory=list)
    u: List[np.ndarray] = field(default_factory=list)
    v: List[np.ndarray] = field(default_factory=list)
    energies: List[EnergyReport] = field(default_factory=list)

    def append(self, t: float, u: np.ndarray, v: np.ndarray, report: EnergyReport) -> None:
        self.times.append(t)
        self.u.append(u)
        self.v.append(v)
        self.energies.append(report)


def _check_grid(L: float, M: int) -> None:
    if not (math.isfinite(L) and L > 0.0):
        raise BadRangeError(f"domain length must be positive, got {L}")
    if M < MIN_GRID or M & (M - 1):
        raise NonPowerOfTwoError(f"M must be a power of two >= {MIN_GRID}, got {M}")


def _full_spectrum(samples: np.ndarray) -> np.ndarray:
    """FFT of real samples with conjugate symmetry exact by construction"""
    half = np.fft.rfft(samples)
    half[0] = half[0].real
    half[-1] = half[-1].real
    return np.concatenate([half, np.conj(half[1:-1][::-1])])


def init_state(
    L: float,
    M: int,
    params: ChainParams,
    u0: EvaluableField,
    v0: EvaluableField,
    tol: Optional[ToleranceBudget] = None,
) -> SpectralState:
    _check_grid(L, M)
    x = np.arange(M) * (L / M)
    state = SpectralState(
        L=L,
        M=M,
        u_hat=_full_spectrum(u0(x)),
        v_hat=_full_spectrum(v0(x)),
        t=0.0,
        params=params,
    )
    report = energy(state, tol or ToleranceBudget.default())
    logger.debug("Initial state", L=L, M=M, u0=u0.name, v0=v0.name, energy=report.total)
    return replace(state, initial_total=report.total)


def _mode_omega_sq(state: SpectralState, tol: ToleranceBudget) -> np.ndarray:
    values, _ = omega_sq_many(state.params, np.abs(state.wavenumbers) * state.params.h, tol)
    return values


def mode_frequencies(state: SpectralState, tol: ToleranceBudget) -> np.ndarray:
    """omega_j = sqrt(omega^2(k_j h)); even in j, zero for the mean mode"""
    return np.sqrt(_mode_omega_sq(state, tol))


def evolve(state: SpectralState, dt: float, steps: int, tol: ToleranceBudget) -> SpectralState:
    """Advance every mode by an exact rotation over steps * dt (dt may be negative)"""
    if steps < 0:
        raise BadRangeError(f"steps must be non-negative, got {steps}")
    if steps == 0:
        return state

    span = steps * dt
    omega = mode_frequencies(state, tol)
    moving = omega > 0.0
    safe = np.where(moving, omega, 1.0)
    c = np.cos(omega * span)
    s = np.sin(omega * span)

    u, v = state.u_hat, state.v_hat
    u_new = np.where(moving, u * c + v * (s / safe), u + v * span)
    v_new = np.where(moving, v * c - u * (safe * s), v)
    return replace(state, u_hat=u_new, v_hat=v_new, t=state.t + span)


def _energy_from(state: SpectralState, stiffness: np.ndarray) -> Tuple[float, float]:
    scale = 0.5 * state.L / (state.M * state.M)
    kinetic = scale * float(np.sum(np.abs(state.v_hat) ** 2))
    elastic = scale * float(np.sum(stiffness * np.abs(state.u_hat) ** 2))
    return kinetic, elastic


def _report(kinetic: float, elastic: float, initial: float) -> EnergyReport:
    total = kinetic + elastic
    drift = abs(total - initial)
    return EnergyReport(
        kinetic=kinetic,
        elastic=elastic,
        total=total,
        drift_rel=drift / abs(initial) if initial != 0.0 else drift,
    )


def energy(state: SpectralState, tol: ToleranceBudget) -> EnergyReport:
    """Kinetic and elastic energy by Parseval; drift against the initial total"""
    kinetic, elastic = _energy_from(state, _mode_omega_sq(state, tol))
    initial = state.initial_total if state.initial_total else kinetic + elastic
    return _report(kinetic, elastic, initial)


def force_window(params: ChainParams, L: float, M: int, tol: ToleranceBudget) -> TruncationWindow:
    """One window certified at the Nyquist wavenumber, valid for every grid mode"""
    _check_grid(L, M)
    kh_max = np.pi * M / L * params.h
    return choose_window(params, kh_max, tol)


def _scale_terms(params: ChainParams, k: np.ndarray, window: TruncationWindow):
    s = window.indices()
    shift = np.power(params.N, s) * params.h
    arg = np.abs(k)[:, None] * shift[None, :]
    computed = arg <= settings.BOUND_ONLY_ARG
    return s, shift, arg, computed


def force_multiplier(params: ChainParams, k: np.ndarray, window: TruncationWindow) -> np.ndarray:
    """Symbol of sum_s xi^s [u(x + N^s h) + u(x - N^s h) - 2u(x)] on wavenumbers k"""
    s, _, arg, computed = _scale_terms(params, k, window)
    weight = np.power(params.xi, s)
    terms = np.where(computed, 4.0 * weight[None, :] * np.sin(0.5 * arg) ** 2, 0.0)
    return -ascending_sum(terms, axis=1)


def elastic_energy_realspace(state: SpectralState, window: TruncationWindow) -> float:
    """1/2 of the integrated elastic density, with shifts applied spectrally"""
    params = state.params
    k = state.wavenumbers
    s = window.indices()
    shift = np.power(params.N, s) * params.h
    phase = np.exp(1j * k[None, :] * shift[:, None])

    ahead = np.fft.ifft(state.u_hat[None, :] * (1.0 - phase), axis=1).real
    behind = np.fft.ifft(state.u_hat[None, :] * (1.0 - np.conj(phase)), axis=1).real
    density = 0.5 * (ahead ** 2 + behind ** 2)

    # periodic trapezoid rule is the plain grid sum
    per_scale = np.sum(density, axis=1) * (state.L / state.M)
    total = float(ascending_sum(np.power(params.xi, s) * per_scale))
    return 0.5 * total


def dalembertian_residual(state: SpectralState, tol: ToleranceBudget) -> float:
    """max_j |Laplacian u + omega_j^2 u| per mode, relative to the largest acceleration"""
    window = force_window(state.params, state.L, state.M, tol)
    laplacian = force_multiplier(state.params, state.wavenumbers, window) * state.u_hat
    acceleration = -_mode_omega_sq(state, tol) * state.u_hat
    scale = float(np.max(np.abs(acceleration)))
    if scale == 0.0:
        return float(np.max(np.abs(laplacian)))
    return float(np.max(np.abs(laplacian - acceleration))) / scale


def omega_max(state: SpectralState, tol: ToleranceBudget) -> float:
    """Largest certified upper bound on the grid frequencies"""
    values, bounds = omega_sq_many(state.params, np.abs(state.wavenumbers) * state.params.h, tol)
    return float(np.sqrt(np.max(values + bounds)))


def run_exact(
    state: SpectralState, dt: float, steps: int, snap_every: int, tol: ToleranceBudget
) -> Trajectory:
    """Exact evolution with a snapshot every `snap_every` steps (and at t=0)"""
    if snap_every < 1:
        raise BadRangeError(f"snap_every must be positive, got {snap_every}")
    trajectory = Trajectory()
    u, v = state.real_space()
    trajectory.append(state.t, u, v, energy(state, tol))
    done = 0
    while done < steps:
        block = min(snap_every, steps - done)
        state = evolve(state, dt, block, tol)
        done += block
        u, v = state.real_space()
        trajectory.append(state.t, u, v, energy(state, tol))
    logger.info("Exact evolution finished", steps=steps, drift_rel=trajectory.energies[-1].drift_rel)
    return trajectory


def verlet_reference(
    state: SpectralState,
    truncation: TruncationWindow,
    dt: float,
    steps: int,
    tol: ToleranceBudget,
    snap_every: int = 1,
) -> Trajectory:
    """Velocity-Verlet trajectory under the truncated real-space force law"""
    if snap_every < 1:
        raise BadRangeError(f"snap_every must be positive, got {snap_every}")
    bound = 2.0 / omega_max(state, tol)
    if not 0.0 < dt < bound:
        logger.error("Unstable Verlet step", dt=dt, limit=bound)
        raise UnstableTimeStepError(f"dt={dt} not below the stability limit 2/omega_max={bound}")

    M, L = state.M, state.L
    k_half = 2.0 * np.pi * np.fft.rfftfreq(M, d=1.0 / M) / L
    multiplier = force_multiplier(state.params, k_half, truncation)
    stiffness = -force_multiplier(state.params, state.wavenumbers, truncation)

    def acceleration(u):
        return np.fft.irfft(np.fft.rfft(u) * multiplier, n=M)

    def report(u, v, initial):
        snapshot = replace(state, u_hat=np.fft.fft(u), v_hat=np.fft.fft(v))
        return _report(*_energy_from(snapshot, stiffness), initial)

    u, v = state.real_space()
    t = state.t
    initial = report(u, v, 0.0).total
    trajectory = Trajectory()
    trajectory.append(t, u.copy(), v.copy(), report(u, v, initial))

    a = acceleration(u)
    for step in range(1, steps + 1):
        v_half = v + 0.5 * dt * a
        u = u + dt * v_half
        a = acceleration(u)
        v = v_half + 0.5 * dt * a
        t = state.t + step * dt
        if step % snap_every == 0 or step == steps:
            trajectory.append(t, u.copy(), v.copy(), report(u, v, initial))

    logger.info(
        "Verlet reference finished",
        steps=steps, dt=dt, s_minus=truncation.s_minus, s_plus=truncation.s_plus,
        drift_rel=trajectory.energies[-1].drift_rel,
    )
    return trajectory
