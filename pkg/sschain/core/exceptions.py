"""
Error types for sschain

Every error carries the process exit code the CLI reports for it.
"""

from typing import Iterable, List, Optional

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_BUDGET = 3
EXIT_STABILITY = 4


class SSChainError(Exception):
    """Base class for all sschain errors"""

    exit_code: int = EXIT_VALIDATION

    def __init__(self, message: str, violations: Optional[Iterable[str]] = None):
        super().__init__(message)
        self.message = message
        self.violations: List[str] = list(violations or [])

    def __str__(self) -> str:
        if not self.violations:
            return self.message
        lines = [self.message] + [f"  - {v}" for v in self.violations]
        return "\n".join(lines)


class InvalidParametersError(SSChainError):
    """Chain, continuum or run parameters failed validation"""


class InvalidWindowError(SSChainError):
    """Admissibility window with beta >= alpha"""


class InadmissibleExponentError(SSChainError):
    """delta lies outside the (beta, alpha) window of a field"""


class BadRangeError(SSChainError):
    """Sampling range or spacing is not usable"""


class OutOfDomainError(SSChainError):
    """Argument outside the definition domain of a function"""


class GammaOverflowError(OutOfDomainError):
    """Gamma function result exceeds the float range"""


class SingularPointError(SSChainError):
    """Evaluation at a kernel singularity"""


class TooFewSamplesError(SSChainError):
    """Curve resolution below the box-counting floor"""


class DegenerateCurveError(SSChainError):
    """Curve with no extent in one of its coordinates"""


class NonPowerOfTwoError(SSChainError):
    """Grid size is not a power of two (or below the minimum)"""


class BudgetExhaustedError(SSChainError):
    """Series window or quadrature would exceed the tolerance budget"""

    exit_code = EXIT_BUDGET


class UnstableTimeStepError(SSChainError):
    """Explicit integrator time step above the stability bound"""

    exit_code = EXIT_STABILITY
