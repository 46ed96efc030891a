from ..schemas import BigJacobiParams, DualHahnParams, QHahnParams, RacahParams
from .base import (
    OrthogonalFamily,
    gram_matrix,
    moment_quotient,
    orthogonality_report,
    recurrence_values,
    ttrr_report,
)
from .bigjacobi import BigJacobiFamily
from .hahn import DualHahnFamily, QHahnFamily
from .racah import RacahFamily, ScaledRacahFamily


def as_family(params) -> OrthogonalFamily:
    """The OrthogonalFamily matching a parameter model."""
    if isinstance(params, RacahParams):
        return RacahFamily(params)
    if isinstance(params, BigJacobiParams):
        return BigJacobiFamily(params)
    if isinstance(params, DualHahnParams):
        return DualHahnFamily(params)
    if isinstance(params, QHahnParams):
        return QHahnFamily(params)
    raise TypeError(f"no orthogonal family for {type(params).__name__}")


__all__ = [
    "OrthogonalFamily",
    "RacahFamily",
    "ScaledRacahFamily",
    "BigJacobiFamily",
    "DualHahnFamily",
    "QHahnFamily",
    "as_family",
    "gram_matrix",
    "moment_quotient",
    "orthogonality_report",
    "recurrence_values",
    "ttrr_report",
]
