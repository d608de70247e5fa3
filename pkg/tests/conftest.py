import numpy as np
import pytest

from sschain.core.logging import setup_logging
from sschain.core.params import ChainParams, ToleranceBudget


@pytest.fixture(scope="session", autouse=True)
def _logging():
    setup_logging("WARNING")


@pytest.fixture
def tol() -> ToleranceBudget:
    return ToleranceBudget.default()


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240607)


@pytest.fixture
def chain() -> ChainParams:
    """The N=1.5, delta=0.7 chain of the dispersion figures"""
    return ChainParams(N=1.5, delta=0.7)
