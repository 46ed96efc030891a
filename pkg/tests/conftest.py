import os
import sys

import pytest

sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), "..")))

from qlimits.config import working_precision  # noqa: E402
from qlimits.schemas import (  # noqa: E402
    BigJacobiParams,
    DualHahnParams,
    MassPoints,
    PrecisionContext,
    QBase,
    QHahnParams,
    RacahParams,
)


@pytest.fixture(autouse=True)
def precision():
    """Every test runs at 30 digits unless it opens its own context."""
    with working_precision(PrecisionContext(digits=30)) as ctx:
        yield ctx


@pytest.fixture
def base():
    return QBase(q="0.5")


@pytest.fixture
def racah_params():
    return RacahParams.from_exponents("0.5", "0.5", "0.2", "0", "5")


@pytest.fixture
def bigjacobi_params(base):
    return BigJacobiParams(base=base, a_t="0.4", b_t="0.3", c_t="-0.2")


@pytest.fixture
def dualhahn_params(base):
    return DualHahnParams(base=base, gamma="0.4", delta="0.3", N=6)


@pytest.fixture
def qhahn_params(base):
    return QHahnParams(base=base, alpha_t="0.4", beta_t="0.3", N=6)


@pytest.fixture
def masses():
    return MassPoints(A="0.3", B="0.2")
