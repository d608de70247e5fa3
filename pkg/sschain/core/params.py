"""
Parameter objects and admissibility checks shared by every engine module
"""

import math
from typing import List, Literal

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from sschain.core.config import settings
from sschain.core.exceptions import InvalidParametersError, InvalidWindowError

ValidationMode = Literal["physical", "mathematical"]

# Open physical interval for delta
PHYSICAL_DELTA = (0.0, 2.0)


class ChainParams(BaseModel):
    """Scaling ratio N, exponent delta and length scale h of a self-similar chain.

    `physical` mode (the default) additionally enforces 0 < delta < 2. Use
    `ChainParams.model_construct(...)` to build an unchecked record whose
    violations are then listed by `validate_physical`.
    """

    model_config = ConfigDict(frozen=True)

    N: float
    delta: float
    h: float = 1.0
    mode: ValidationMode = "physical"

    @field_validator("N", "delta", "h")
    @classmethod
    def _finite(cls, v: float) -> float:
        if not math.isfinite(v):
            raise ValueError("must be finite")
        return v

    @field_validator("N")
    @classmethod
    def _n_above_one(cls, v: float) -> float:
        if v <= 1.0:
            raise ValueError("N must exceed 1")
        return v

    @field_validator("h")
    @classmethod
    def _h_positive(cls, v: float) -> float:
        if v <= 0.0:
            raise ValueError("h must be positive")
        return v

    @model_validator(mode="after")
    def _physical_window(self) -> "ChainParams":
        if self.mode == "physical" and not (PHYSICAL_DELTA[0] < self.delta < PHYSICAL_DELTA[1]):
            raise ValueError("δ not in (0,2)")
        return self

    @property
    def xi(self) -> float:
        return self.N ** (-self.delta)

    @property
    def lam(self) -> float:
        """Lambda = N^delta, the affine eigenvalue"""
        return self.N ** self.delta

    def with_h(self, h: float) -> "ChainParams":
        return self.model_copy(update={"h": h})

    @classmethod
    def checked(cls, **kwargs) -> "ChainParams":
        """Construct, converting pydantic errors to InvalidParametersError"""
        try:
            return cls(**kwargs)
        except ValueError as e:
            raise InvalidParametersError("invalid chain parameters", pydantic_messages(e)) from e


class AdmissibilityWindow(BaseModel):
    """Small-argument exponent alpha and large-argument exponent beta of a function"""

    model_config = ConfigDict(frozen=True)

    alpha: float
    beta: float


class ToleranceBudget(BaseModel):
    model_config = ConfigDict(frozen=True)

    rel_tol: float = Field(default_factory=lambda: settings.DEFAULT_REL_TOL, gt=0)
    abs_tol: float = Field(default_factory=lambda: settings.DEFAULT_ABS_TOL, gt=0)
    max_terms: int = Field(default_factory=lambda: settings.DEFAULT_MAX_TERMS, ge=3)
    max_quad_evals: int = Field(default_factory=lambda: settings.DEFAULT_MAX_QUAD_EVALS, gt=0)

    @classmethod
    def default(cls) -> "ToleranceBudget":
        return cls()

    def target(self, partial: float) -> float:
        """Allowed total truncation error for a partial sum of this magnitude"""
        return max(self.abs_tol, self.rel_tol * abs(partial))


class ValidationReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    violations: List[str] = Field(default_factory=list)

    @property
    def admissible(self) -> bool:
        return not self.violations


def validate_physical(params: ChainParams) -> ValidationReport:
    """List every violated physical constraint of a (possibly unchecked) parameter record"""
    violations = []
    if not params.N > 1.0:
        violations.append("N must exceed 1")
    if not params.h > 0.0:
        violations.append("h must be positive")
    if not (PHYSICAL_DELTA[0] < params.delta < PHYSICAL_DELTA[1]):
        violations.append("δ not in (0,2)")
    return ValidationReport(violations=violations)


def delta_window(window: AdmissibilityWindow, params: ChainParams) -> bool:
    """True iff beta < delta < alpha (open interval, no widening)"""
    if not window.beta < window.alpha:
        raise InvalidWindowError(
            f"admissibility window needs beta < alpha, got beta={window.beta}, alpha={window.alpha}"
        )
    return window.beta < params.delta < window.alpha


def pydantic_messages(error: ValueError) -> List[str]:
    errors = getattr(error, "errors", None)
    if errors is None:
        return [str(error)]
    messages = []
    for item in errors():
        loc = ".".join(str(p) for p in item.get("loc", ()))
        msg = item.get("msg", "").removeprefix("Value error, ")
        messages.append(f"{loc}: {msg}" if loc else msg)
    return messages
