"""
Point-evaluable fields u(x) with declared power-law exponents
"""

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from sschain.core.params import AdmissibilityWindow

ArrayFn = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class EvaluableField:
    """A real field evaluated pointwise.

    `eval` must accept numpy arrays (elementwise) and be safe to call from
    several threads at once. `decay_beta` is the declared large-argument
    exponent, `smooth_alpha` the small-argument exponent of its second
    differences. `d2`, when given, is the exact second derivative.
    `magnitude`, when given, returns the size of the quantities `eval`
    combines; its rounding error is a few ulps of that size. `wavenumber`
    marks a plane wave A cos(k x + phase), for which
    u(x - t) + u(x + t) = 2 u(x) cos(k t).
    """

    eval: ArrayFn
    decay_beta: float
    smooth_alpha: float = 2.0
    d2: Optional[ArrayFn] = None
    name: str = "field"
    magnitude: Optional[ArrayFn] = None
    wavenumber: Optional[float] = None

    def __call__(self, x) -> np.ndarray:
        return np.asarray(self.eval(np.asarray(x, dtype=float)), dtype=float)

    def size(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if self.magnitude is None:
            return np.abs(self(x))
        return np.abs(np.asarray(self.magnitude(x), dtype=float))

    @property
    def window(self) -> AdmissibilityWindow:
        return AdmissibilityWindow(alpha=self.smooth_alpha, beta=self.decay_beta)

    def scaled(self, a: float) -> "EvaluableField":
        d2 = None if self.d2 is None else (lambda x, f=self.d2: a * f(x))
        return EvaluableField(
            eval=lambda x, f=self.eval: a * f(x),
            decay_beta=self.decay_beta,
            smooth_alpha=self.smooth_alpha,
            d2=d2,
            name=f"{a}*{self.name}",
            wavenumber=self.wavenumber,
        )

    def __add__(self, other: "EvaluableField") -> "EvaluableField":
        d2 = None
        if self.d2 is not None and other.d2 is not None:
            d2 = lambda x, f=self.d2, g=other.d2: f(x) + g(x)  # noqa: E731
        return EvaluableField(
            eval=lambda x, f=self.eval, g=other.eval: f(x) + g(x),
            decay_beta=max(self.decay_beta, other.decay_beta),
            smooth_alpha=min(self.smooth_alpha, other.smooth_alpha),
            d2=d2,
            name=f"({self.name}+{other.name})",
        )


def gaussian(center: float = 0.0, width: float = 1.0, amplitude: float = 1.0) -> EvaluableField:
    """amplitude * exp(-((x - center)/width)^2); declared decay exponent -4"""

    def u(x):
        z = (x - center) / width
        return amplitude * np.exp(-z * z)

    def u2(x):
        z = (x - center) / width
        return amplitude * (4.0 * z * z - 2.0) * np.exp(-z * z) / (width * width)

    return EvaluableField(eval=u, decay_beta=-4.0, d2=u2, name="gaussian")


def lorentzian(center: float = 0.0, amplitude: float = 1.0) -> EvaluableField:
    """amplitude / (1 + (x - center)^4)"""

    def u(x):
        z = x - center
        return amplitude / (1.0 + z ** 4)

    def u2(x):
        z = x - center
        d = 1.0 + z ** 4
        return amplitude * (32.0 * z ** 6 / d ** 3 - 12.0 * z ** 2 / d ** 2)

    return EvaluableField(eval=u, decay_beta=-4.0, d2=u2, name="lorentzian")


def constant(c: float = 1.0) -> EvaluableField:
    return EvaluableField(
        eval=lambda x: np.full_like(x, c, dtype=float),
        decay_beta=0.0,
        d2=lambda x: np.zeros_like(x, dtype=float),
        name="constant",
    )


def cosine(k: float, amplitude: float = 1.0) -> EvaluableField:
    """amplitude * cos(k x), an eigenfunction of the self-similar Laplacian"""
    return EvaluableField(
        eval=lambda x: amplitude * np.cos(k * x),
        decay_beta=0.0,
        d2=lambda x: -k * k * amplitude * np.cos(k * x),
        name="cosine",
        wavenumber=k,
    )


def identity() -> EvaluableField:
    return EvaluableField(eval=lambda x: x, decay_beta=1.0, smooth_alpha=1.0, name="identity")
