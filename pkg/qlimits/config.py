"""
Runtime configuration.

Environment settings are read through python-dotenv; the precision policy is
published per context so that nested library calls all see the same digits.
"""

import contextvars
import functools
import os
from contextlib import contextmanager
from pathlib import Path
from typing import Optional

from dotenv import load_dotenv
from mpmath import mp

from .schemas import PrecisionContext

load_dotenv()


class Settings:
    BASE_DIR = Path(__file__).resolve().parent.parent

    @property
    def digits(self) -> int:
        return int(os.getenv("QLIMITS_DIGITS", "16"))

    @property
    def study_digits(self) -> int:
        return int(os.getenv("QLIMITS_STUDY_DIGITS", "64"))

    @property
    def max_terms(self) -> int:
        return int(os.getenv("QLIMITS_MAX_TERMS", str(10**6)))

    @property
    def max_support_points(self) -> int:
        return int(os.getenv("QLIMITS_MAX_SUPPORT", str(10**4)))

    @property
    def log_level(self) -> str:
        return os.getenv("QLIMITS_LOG_LEVEL", "INFO").upper()

    @property
    def output_dir(self) -> Path:
        return Path(os.getenv("QLIMITS_OUTPUT_DIR", str(self.BASE_DIR / "results")))


settings = Settings()

# Parameter sets used by the acceptance runs and as CLI defaults.
DESK_PARAMETERS = {
    "q": "0.5",
    "racah": {"alpha": "0.5", "beta": "0.2", "a": "0", "b": "5"},
    "bigjacobi": {"a": "0.4", "b": "0.3", "c": "-0.2"},
    "dualhahn": {"gamma": "0.4", "delta": "0.3", "N": "6"},
    "qhahn": {"alpha": "0.4", "beta": "0.3", "N": "6"},
    "masses": {"A": "0.3", "B": "0.2"},
}

DEFAULT_SCHEDULES = {
    "to-big-jacobi": ["10", "20", "40", "80"],
    "to-dual-hahn": ["1e-2", "1e-4", "1e-6", "1e-8"],
    "to-q-hahn": ["1e-2", "1e-4", "1e-6", "1e-8"],
}

_ACTIVE: contextvars.ContextVar[Optional[PrecisionContext]] = contextvars.ContextVar(
    "qlimits_precision", default=None
)


def current_precision() -> PrecisionContext:
    """The active PrecisionContext, or one built from QLIMITS_DIGITS."""
    ctx = _ACTIVE.get()
    if ctx is None:
        ctx = PrecisionContext(digits=settings.digits)
    return ctx


@contextmanager
def working_precision(ctx: PrecisionContext):
    """Evaluate the enclosed block at ctx.working_digits with ctx as the tolerance policy."""
    token = _ACTIVE.set(ctx)
    try:
        with mp.workdps(ctx.working_digits):
            yield ctx
    finally:
        _ACTIVE.reset(token)


def precise(func):
    """Run func under the default precision unless a context is already active."""

    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        if _ACTIVE.get() is not None:
            return func(*args, **kwargs)
        with working_precision(current_precision()):
            return func(*args, **kwargs)

    return wrapper
