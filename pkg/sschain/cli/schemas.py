"""
Run configurations for the command-line tools

Keys equal the flag names with '-' replaced by '_', so the same JSON file
can feed every command; keys a command does not know are ignored.
"""

import math
from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field

from sschain.core.exceptions import InvalidParametersError
from sschain.core.params import ChainParams, ToleranceBudget, validate_physical
from sschain.engine.continuum import ContinuumParams
from sschain.engine.wm_dispersion import Spacing


class RunConfig(BaseModel):
    model_config = ConfigDict(extra="ignore", frozen=True)

    tol: Optional[float] = Field(default=None, gt=0)

    def budget(self) -> ToleranceBudget:
        if self.tol is None:
            return ToleranceBudget.default()
        return ToleranceBudget(rel_tol=self.tol, abs_tol=self.tol)


class ChainConfig(RunConfig):
    N: float = 1.5
    delta: Optional[float] = None
    h: float = 1.0

    def chain_params(self) -> ChainParams:
        """Validated parameters; every violated constraint is reported at once"""
        if self.delta is None:
            raise InvalidParametersError("invalid chain parameters", ["delta is required"])
        raw = ChainParams.model_construct(N=self.N, delta=self.delta, h=self.h, mode="physical")
        violations = [
            f"{name} must be finite"
            for name, v in (("N", self.N), ("delta", self.delta), ("h", self.h))
            if not math.isfinite(v)
        ]
        violations += validate_physical(raw).violations
        if violations:
            raise InvalidParametersError("invalid chain parameters", violations)
        return ChainParams(N=self.N, delta=self.delta, h=self.h)


class DispersionConfig(ChainConfig):
    kh_min: float = 0.0
    kh_max: float = 30.0
    samples: int = 4096
    spacing: Spacing = Spacing.LINEAR
    out: str = "-"


class FractalConfig(DispersionConfig):
    samples: int = 2 ** 16
    scales: int = 10
    normalize: bool = True
    selftest: bool = False


class DensityConfig(RunConfig):
    delta: float
    h: float = 1.0
    epsilon: float = 1e-3
    omega_min: float = 0.0
    omega_max: float = 1.0
    samples: int = 101
    out: str = "-"

    def continuum_params(self) -> ContinuumParams:
        return ContinuumParams.checked(epsilon=self.epsilon, delta=self.delta, h=self.h)


class SimulateConfig(ChainConfig):
    L: float = 64.0
    M: int = 1024
    packet_center: Optional[float] = None
    packet_width: float = 1.0
    packet_amplitude: float = 1.0
    mode_number: Optional[int] = None
    dt: float = 0.01
    steps: int = Field(default=100, ge=0)
    snap_every: int = Field(default=10, ge=1)
    integrator: Literal["exact", "verlet"] = "exact"
    out_dir: str = "simulation"


class ContinuumConfig(RunConfig):
    delta: float
    h: float = 1.0
    epsilon: float = 1e-3
    field: Literal["gaussian", "lorentzian", "constant"] = "gaussian"
    x: float = 0.0
    out: str = "-"

    def continuum_params(self) -> ContinuumParams:
        return ContinuumParams.checked(epsilon=self.epsilon, delta=self.delta, h=self.h)
