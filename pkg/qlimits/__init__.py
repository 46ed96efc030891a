"""Non-standard q-Racah polynomials, their Krall modifications and limit transitions."""

from .config import current_precision, settings, working_precision
from .errors import (
    CoincidentPoints,
    DegreeError,
    DenominatorZero,
    NonConvergence,
    NumericalError,
    ParameterError,
    PoleError,
    QLimitsError,
    SingularModification,
)
from .families import (
    BigJacobiFamily,
    DualHahnFamily,
    OrthogonalFamily,
    QHahnFamily,
    RacahFamily,
    ScaledRacahFamily,
    as_family,
    orthogonality_report,
    ttrr_report,
)
from .krall import KrallFamily, kernel, krall_eval, krall_norm_sq, krall_ttrr_coeffs
from .limits import LimitTransform, run_limit_study
from .schemas import (
    BigJacobiParams,
    DualHahnParams,
    LimitKind,
    MassPoints,
    PrecisionContext,
    QBase,
    QHahnParams,
    RacahParams,
    RacahRegime,
)

__version__ = "0.1.0"
