from enum import Enum
from pathlib import Path
from typing import Annotated, Any, Dict, List, Optional

from mpmath import mp
from pydantic import (
    BaseModel,
    BeforeValidator,
    ConfigDict,
    Field,
    PlainSerializer,
    PrivateAttr,
    model_validator,
)

from .errors import ParameterError


def _to_mpf(value: Any):
    if isinstance(value, mp.mpf):
        return value
    if isinstance(value, float):
        # shortest decimal form, so 0.4 means 0.4 at the working precision
        return mp.mpf(repr(value))
    if isinstance(value, (int, str)):
        return mp.mpf(value)
    raise TypeError(f"cannot interpret {value!r} as a real number")


def _mp_str(value) -> str:
    if not isinstance(value, mp.mpf):
        return str(value)
    from .config import current_precision

    return mp.nstr(value, current_precision().digits, strip_zeros=False)


MpReal = Annotated[Any, BeforeValidator(_to_mpf), PlainSerializer(_mp_str, return_type=str)]
Point = Annotated[Any, PlainSerializer(_mp_str, return_type=str)]


def _log_q(value, q):
    return mp.log(value) / mp.log(q)


# ---------- Precision ----------
# Extra digits carried during evaluation; tolerances and output use `digits`.
GUARD_DIGITS = 12


class PrecisionContext(BaseModel):
    """Requested precision plus the tolerance policy derived from it."""

    model_config = ConfigDict(frozen=True)

    digits: int = Field(16, ge=15)
    rel_tol: float = 0.0
    trunc_tol: float = 0.0

    @model_validator(mode="before")
    @classmethod
    def _fill_defaults(cls, data: Any):
        if not isinstance(data, dict):
            return data
        data = dict(data)
        digits = int(data.get("digits", 16))
        if not data.get("rel_tol"):
            data["rel_tol"] = 10.0 ** (5 - digits)
        if not data.get("trunc_tol"):
            data["trunc_tol"] = 10.0 ** (-digits)
        return data

    @model_validator(mode="after")
    def _check_tolerances(self):
        if self.rel_tol < 10.0 ** (5 - self.digits):
            raise ValueError(f"rel_tol must be >= 1e{5 - self.digits} at {self.digits} digits")
        if self.trunc_tol < 10.0 ** (-self.digits):
            raise ValueError(f"trunc_tol must be >= 1e{-self.digits} at {self.digits} digits")
        return self

    @property
    def working_digits(self) -> int:
        return self.digits + GUARD_DIGITS


# ---------- Base ----------
class QBase(BaseModel):
    model_config = ConfigDict(frozen=True)

    q: MpReal
    _kappa: Dict[int, Any] = PrivateAttr(default_factory=dict)

    @model_validator(mode="after")
    def _check_q(self):
        if not 0 < self.q < 1:
            raise ParameterError(f"q must satisfy 0 < q < 1, got {mp.nstr(self.q, 10)}")
        return self

    @property
    def kappa_q(self):
        """q^(1/2) - q^(-1/2), cached per working precision."""
        value = self._kappa.get(mp.prec)
        if value is None:
            root = mp.sqrt(self.q)
            value = root - 1 / root
            self._kappa[mp.prec] = value
        return value

    def power(self, exponent):
        return mp.power(self.q, exponent)


# ---------- Family parameters ----------
class RacahRegime(str, Enum):
    STANDARD = "standard"
    BIG_JACOBI_TRANSFORMED = "big-jacobi-transformed"


class RacahParams(BaseModel):
    """
    Non-standard q-Racah parameters in exponential form.

    q_alpha = q^alpha, q_beta = q^beta, q_2a = q^(2a) and N = b - a. The lattice
    is indexed by sigma = s - a in 0..N-1.
    """

    model_config = ConfigDict(frozen=True)

    base: QBase
    q_alpha: MpReal
    q_beta: MpReal
    q_2a: MpReal
    N: int = Field(ge=1)
    regime: RacahRegime = RacahRegime.STANDARD

    @model_validator(mode="after")
    def _check_admissible(self):
        q = self.base.q
        if self.regime is RacahRegime.STANDARD:
            if self.q_alpha <= 0 or self.q_beta <= 0 or self.q_2a <= 0:
                raise ParameterError("standard regime needs q^alpha, q^beta, q^(2a) > 0")
            ex = self.exponents()
            a, alpha, beta = ex["a"], ex["alpha"], ex["beta"]
            if not a > -0.5:
                raise ParameterError(f"need -1/2 < a, got a = {mp.nstr(a, 10)}")
            if not alpha > -1:
                raise ParameterError(f"need alpha > -1, got alpha = {mp.nstr(alpha, 10)}")
            if not -1 < beta < 2 * a + 1:
                raise ParameterError(
                    f"need -1 < beta < 2a+1, got beta = {mp.nstr(beta, 10)}, a = {mp.nstr(a, 10)}"
                )
        else:
            if self.q_2a == 0:
                raise ParameterError("q^(2a) must be nonzero")
            if not 0 < q * self.q_alpha < 1:
                raise ParameterError("transformed regime needs 0 < q*q^alpha < 1")
            if not 0 <= q * self.q_beta < 1:
                raise ParameterError("transformed regime needs 0 <= q*q^beta < 1")
        return self

    @classmethod
    def from_exponents(cls, q, alpha, beta, a, b) -> "RacahParams":
        q, alpha, beta, a, b = (_to_mpf(v) for v in (q, alpha, beta, a, b))
        N = int(mp.nint(b - a))
        if N < 1 or abs((b - a) - N) > mp.mpf(10) ** (5 - mp.dps):
            raise ParameterError(f"b - a must be a positive integer, got {mp.nstr(b - a, 10)}")
        return cls(
            base=QBase(q=q),
            q_alpha=mp.power(q, alpha),
            q_beta=mp.power(q, beta),
            q_2a=mp.power(q, 2 * a),
            N=N,
        )

    def exponents(self) -> Dict[str, Any]:
        """Recover (a, b, alpha, beta) by logarithms; standard regime only."""
        if self.regime is not RacahRegime.STANDARD:
            raise ParameterError("exponents are complex outside the standard regime")
        q = self.base.q
        a = _log_q(self.q_2a, q) / 2
        return {
            "a": a,
            "b": a + self.N,
            "alpha": _log_q(self.q_alpha, q),
            "beta": _log_q(self.q_beta, q),
        }


class RacahLattice(BaseModel):
    """mu(s) = c1 (q^s + q^(-s-1)) + c3 on the offsets sigma = s - a."""

    c1: MpReal
    c3: MpReal
    grid: List[int]


class BigJacobiParams(BaseModel):
    model_config = ConfigDict(frozen=True)

    base: QBase
    a_t: MpReal
    b_t: MpReal
    c_t: MpReal

    @model_validator(mode="after")
    def _check_admissible(self):
        q = self.base.q
        if not 0 < q * self.a_t < 1:
            raise ParameterError("big q-Jacobi needs 0 < q*a < 1")
        if not 0 <= q * self.b_t < 1:
            raise ParameterError("big q-Jacobi needs 0 <= q*b < 1")
        if not self.c_t < 0:
            raise ParameterError("big q-Jacobi needs c < 0")
        return self


class DualHahnParams(BaseModel):
    model_config = ConfigDict(frozen=True)

    base: QBase
    gamma: MpReal
    delta: MpReal
    N: int = Field(ge=1)

    @model_validator(mode="after")
    def _check_admissible(self):
        q = self.base.q
        upper = mp.power(q, -self.N)
        inside = 0 < self.gamma * q < 1 and 0 < self.delta * q < 1
        outside = self.gamma > upper and self.delta > upper
        if not (inside or outside):
            raise ParameterError("dual q-Hahn needs 0 < gamma*q, delta*q < 1 or gamma, delta > q^-N")
        return self


class QHahnParams(BaseModel):
    model_config = ConfigDict(frozen=True)

    base: QBase
    alpha_t: MpReal
    beta_t: MpReal
    N: int = Field(ge=1)

    @model_validator(mode="after")
    def _check_admissible(self):
        q = self.base.q
        upper = mp.power(q, -self.N)
        inside = 0 < self.alpha_t * q < 1 and 0 < self.beta_t * q < 1
        outside = self.alpha_t > upper and self.beta_t > upper
        if not (inside or outside):
            raise ParameterError("q-Hahn needs 0 < alpha*q, beta*q < 1 or alpha, beta > q^-N")
        return self


# ---------- Krall ----------
class MassPoints(BaseModel):
    model_config = ConfigDict(frozen=True)

    A: MpReal = Field(default_factory=lambda: mp.mpf(0))
    B: MpReal = Field(default_factory=lambda: mp.mpf(0))

    @property
    def is_zero(self) -> bool:
        return self.A == 0 and self.B == 0


class KernelValue(BaseModel):
    n: int
    s1: Point
    s2: Point
    value: MpReal
    cd_value: Optional[MpReal] = None
    cd_residual: Optional[MpReal] = None


# ---------- Reports ----------
class OrthogonalityReport(BaseModel):
    family: str
    n_max: int
    gram: List[List[MpReal]]
    norms: List[MpReal]
    residuals: List[List[MpReal]]
    max_off_diagonal: MpReal
    max_diagonal: MpReal
    flags: List[str] = []

    def passed(self, tol) -> bool:
        return self.max_off_diagonal < tol and self.max_diagonal < tol


class TtrrReport(BaseModel):
    family: str
    n_max: int
    beta: List[MpReal]
    gamma: List[MpReal]
    residuals: List[MpReal]
    max_residual: MpReal
    flags: List[str] = []

    def passed(self, tol) -> bool:
        return self.max_residual < tol


class LimitKind(str, Enum):
    TO_BIG_JACOBI = "to-big-jacobi"
    TO_DUAL_HAHN = "to-dual-hahn"
    TO_Q_HAHN = "to-q-hahn"


class QuantityErrors(BaseModel):
    """Error series of one quantity (at one degree) along a control schedule."""

    quantity: str
    n: Optional[int] = None
    errors: List[MpReal]
    monotone: bool = True
    final_ok: bool = True

    @property
    def passed(self) -> bool:
        return self.monotone and self.final_ok


class LimitStudyReport(BaseModel):
    kind: LimitKind
    study: str
    schedule: List[MpReal]
    n_max: int
    tolerance: float
    factor: float
    series: List[QuantityErrors]
    verdicts: Dict[str, bool] = {}
    flags: List[str] = []

    @property
    def passed(self) -> bool:
        return all(self.verdicts.values())


class RunConfig(BaseModel):
    """Everything a CLI command needs; built from a config file and flags."""

    command: str
    family: Optional[str] = None
    kind: Optional[LimitKind] = None
    suite: str = "all"
    q: str = "0.5"
    params: Dict[str, str] = {}
    # None picks settings.digits, or settings.study_digits for limit studies
    digits: Optional[int] = Field(None, ge=15)
    rel_tol: float = Field(1e-12, ge=0)
    # None picks 4 for verify, 3 for limit studies
    n_max: Optional[int] = Field(None, ge=0)
    degree: int = Field(0, ge=0)
    points: List[str] = []
    schedule: Optional[List[str]] = None
    sample_points: int = Field(10, ge=1)
    mass_A: Optional[str] = None
    mass_B: Optional[str] = None
    krall: bool = False
    out: Optional[Path] = None
    format: str = "text"

    @model_validator(mode="after")
    def _check_format(self):
        if self.format not in ("json", "csv", "text"):
            raise ValueError(f"format must be json, csv or text, got {self.format}")
        return self
