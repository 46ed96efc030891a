"""
Limit transitions from the non-standard q-Racah family.

A LimitTransform fixes a target family and one value of the control
variable (N for big q-Jacobi, q^alpha for dual q-Hahn, q^a for q-Hahn) and
derives the q-Racah parameters for it. The studies sweep a schedule of
control values and tabulate how far the renormalized q-Racah objects are
from their targets.
"""

import logging
import math
from typing import Dict, List, Optional, Sequence, Tuple, Union

from mpmath import mp
from pydantic import BaseModel, ConfigDict, model_validator

from .config import current_precision, precise
from .errors import ParameterError
from .families import ScaledRacahFamily, as_family, gram_matrix
from .families.bigjacobi import bigjacobi_eval, bigjacobi_weight
from .families.hahn import dualhahn_eval, qhahn_eval
from .families.racah import racah_eval, racah_eval_transformed
from .krall import KrallFamily, kernel_sum, krall_delta, krall_norm_sq, krall_ttrr_coeffs
from .schemas import (
    BigJacobiParams,
    DualHahnParams,
    LimitKind,
    LimitStudyReport,
    MassPoints,
    MpReal,
    QHahnParams,
    QuantityErrors,
    RacahParams,
    RacahRegime,
)
from .utils import relative_error

logger = logging.getLogger(__name__)

# (per-step factor, tolerance at the last control value)
VERDICT_POLICY = {
    LimitKind.TO_BIG_JACOBI.value: (0.1, 1e-10),
    LimitKind.TO_DUAL_HAHN.value: (1.05, 1e-6),
    LimitKind.TO_Q_HAHN.value: (1.05, 1e-6),
    "krall": (1.05, 1e-8),
}

SAMPLE_FLAG = "samples per branch capped at ceil(N/4); the weight error at branch point s behaves like q^(N-2s)"

_TARGETS = {
    LimitKind.TO_BIG_JACOBI: BigJacobiParams,
    LimitKind.TO_DUAL_HAHN: DualHahnParams,
    LimitKind.TO_Q_HAHN: QHahnParams,
}

TargetParams = Union[BigJacobiParams, DualHahnParams, QHahnParams]


def _as_size(control) -> int:
    size = int(mp.nint(control))
    if size < 1 or size != control:
        raise ParameterError(f"big q-Jacobi control must be a positive integer N, got {control}")
    return size


@precise
def derive_racah_params(kind: LimitKind, target: TargetParams, control) -> RacahParams:
    """q-Racah parameters of the transform at one control value; b - a = N + 1."""
    kind = LimitKind(kind)
    base = target.base
    q = base.q
    control = mp.mpf(control)
    if kind is LimitKind.TO_BIG_JACOBI:
        N = _as_size(control)
        return RacahParams(
            base=base,
            q_alpha=target.a_t,
            q_beta=target.b_t,
            q_2a=target.c_t * mp.power(q, -N - 1) / target.a_t,
            N=N + 1,
            regime=RacahRegime.BIG_JACOBI_TRANSFORMED,
        )
    if kind is LimitKind.TO_DUAL_HAHN:
        return RacahParams(
            base=base, q_alpha=control, q_beta=target.gamma, q_2a=target.gamma * target.delta, N=target.N + 1
        )
    return RacahParams(base=base, q_alpha=target.beta_t, q_beta=target.alpha_t, q_2a=control ** 2, N=target.N + 1)


@precise
def normalization_Cn(kind: LimitKind, target: TargetParams, control, n: int):
    """
    C_n of the transition.

    For the big q-Jacobi limit the half-power (q^N c/a)^(n/2) is imaginary
    for odd n; it is paired with the factor racah_eval_transformed leaves
    out, and the real product q^(nN) (q a)^n kappa^(2n) is returned.
    """
    kind = LimitKind(kind)
    q, kappa = target.base.q, target.base.kappa_q
    if kind is LimitKind.TO_BIG_JACOBI:
        N = _as_size(control)
        return mp.power(q, n * N) * mp.power(q * target.a_t, n) * mp.power(kappa, 2 * n)
    q_2a = target.gamma * target.delta if kind is LimitKind.TO_DUAL_HAHN else mp.mpf(control) ** 2
    return mp.power(q * q_2a, mp.mpf(n) / 2) * mp.power(kappa, 2 * n)


@precise
def normalization_Cn_sq(kind: LimitKind, target: TargetParams, control, n: int):
    """C_n^2, real for every kind; (q^N c/a)^n (q a)^(2n) kappa^(4n) for big q-Jacobi."""
    kind = LimitKind(kind)
    if kind is LimitKind.TO_BIG_JACOBI:
        q, kappa = target.base.q, target.base.kappa_q
        N = _as_size(control)
        return (
            mp.power(mp.power(q, N) * target.c_t / target.a_t, n)
            * mp.power(q * target.a_t, 2 * n)
            * mp.power(kappa, 4 * n)
        )
    return normalization_Cn(kind, target, control, n) ** 2


class LimitTransform(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: LimitKind
    target: TargetParams
    control: MpReal

    @model_validator(mode="after")
    def _check(self):
        expected = _TARGETS[self.kind]
        if not isinstance(self.target, expected):
            raise ParameterError(f"{self.kind.value} needs {expected.__name__}, got {type(self.target).__name__}")
        if self.kind is LimitKind.TO_BIG_JACOBI:
            _as_size(self.control)
        elif not 0 < self.control < 1:
            raise ParameterError(f"{self.kind.value} control must lie in (0, 1), got {mp.nstr(self.control, 10)}")
        return self

    @property
    def N(self) -> int:
        if self.kind is LimitKind.TO_BIG_JACOBI:
            return _as_size(self.control)
        return self.target.N

    def racah_params(self) -> RacahParams:
        return derive_racah_params(self.kind, self.target, self.control)

    def scale_shift(self) -> Tuple:
        q = self.target.base.q
        if self.kind is LimitKind.TO_BIG_JACOBI:
            return mp.power(q, self.N + 1) * self.target.a_t, mp.zero
        if self.kind is LimitKind.TO_DUAL_HAHN:
            return mp.one, mp.zero
        return mp.one, -(1 + q) * self.control

    def source_family(self) -> ScaledRacahFamily:
        scale, shift = self.scale_shift()
        return ScaledRacahFamily(self.racah_params(), scale, shift)

    def target_family(self):
        return as_family(self.target)

    @precise
    def round_trip_error(self):
        """Largest relative gap after mapping the derived q-Racah parameters back."""
        rp = self.racah_params()
        q = rp.base.q
        if self.kind is LimitKind.TO_BIG_JACOBI:
            pairs = [
                (rp.q_alpha, self.target.a_t),
                (rp.q_beta, self.target.b_t),
                (rp.q_2a * mp.power(q, rp.N) * rp.q_alpha, self.target.c_t),
                (mp.mpf(rp.N - 1), mp.mpf(self.N)),
            ]
        elif self.kind is LimitKind.TO_DUAL_HAHN:
            pairs = [
                (rp.q_beta, self.target.gamma),
                (rp.q_2a / rp.q_beta, self.target.delta),
                (rp.q_alpha, self.control),
                (mp.mpf(rp.N - 1), mp.mpf(self.target.N)),
            ]
        else:
            pairs = [
                (rp.q_beta, self.target.alpha_t),
                (rp.q_alpha, self.target.beta_t),
                (mp.sqrt(rp.q_2a), self.control),
                (mp.mpf(rp.N - 1), mp.mpf(self.target.N)),
            ]
        return max(relative_error(value, original) for value, original in pairs)

    def sample_map(self, sample_points: int) -> List[Tuple]:
        """
        (sigma, target point) pairs. For big q-Jacobi, sigma = s maps to
        c q^(s+1) and sigma = N - s to a q^(s+1).
        """
        if self.kind is LimitKind.TO_BIG_JACOBI:
            q, N = self.target.base.q, self.N
            count = min(sample_points, math.ceil(N / 4))
            left = [(s, self.target.c_t * mp.power(q, s + 1)) for s in range(count)]
            right = [(N - s, self.target.a_t * mp.power(q, s + 1)) for s in range(count)]
            return left + right
        return [(s, s) for s in range(min(sample_points, self.target.N + 1))]


@precise
def support_convergence(target: BigJacobiParams, N: int) -> Dict:
    """
    Image of the transformed lattice against the big q-Jacobi support:
    the largest gap over the first ceil(N/4) points of each branch and
    whether mu~(sigma) increases through a single sign change.
    """
    transform = LimitTransform(kind=LimitKind.TO_BIG_JACOBI, target=target, control=N)
    source = transform.source_family()
    image = [source.abscissa(sigma) for sigma in range(N + 1)]
    gap = max(abs(image[sigma] - z) for sigma, z in transform.sample_map(N))
    increasing = all(x < y for x, y in zip(image, image[1:]))
    sign_changes = sum(1 for x, y in zip(image, image[1:]) if (x < 0) != (y < 0))
    return {"gap": gap, "increasing": increasing, "single_sign_change": sign_changes == 1}


# ---------- Studies ----------
def _check_schedule(kind: LimitKind, schedule: Sequence) -> List:
    if not schedule:
        raise ParameterError("schedule must not be empty")
    values = [mp.mpf(v) for v in schedule]
    if kind is LimitKind.TO_BIG_JACOBI:
        for v in values:
            _as_size(v)
        if any(x >= y for x, y in zip(values, values[1:])):
            raise ParameterError("N schedule must be strictly increasing")
        digits = current_precision().digits
        if max(values) >= 40 and digits < 50:
            raise ParameterError(f"N >= 40 needs at least 50 digits, running at {digits}")
    else:
        if any(not 0 < v < 1 for v in values):
            raise ParameterError("q-power schedule values must lie in (0, 1)")
        if any(x <= y for x, y in zip(values, values[1:])):
            raise ParameterError("q-power schedule must be strictly decreasing")
    return values


def _series(rows: List[Dict]) -> List[QuantityErrors]:
    keys = list(rows[0])
    return [QuantityErrors(quantity=q, n=n, errors=[row[(q, n)] for row in rows]) for q, n in keys]


@precise
def evaluate_verdicts(series: List[QuantityErrors], factor: float, tolerance: float) -> Tuple:
    """
    Consecutive errors pass when next <= max(prev * factor, floor) with
    floor = 10^(10 - digits); the last error must be below tolerance.
    """
    floor = mp.mpf(10) ** (10 - current_precision().digits)
    judged, verdicts = [], {}
    for item in series:
        errs = item.errors
        monotone = all(y <= max(x * factor, floor) for x, y in zip(errs, errs[1:]))
        final_ok = errs[-1] <= tolerance
        item = item.model_copy(update={"monotone": monotone, "final_ok": final_ok})
        key = item.quantity if item.n is None else f"{item.quantity}[n={item.n}]"
        verdicts[key] = item.passed
        if not item.passed:
            logger.warning(f"{key}: errors {[mp.nstr(e, 3) for e in errs]} fail (factor {factor}, tol {tolerance})")
        judged.append(item)
    return judged, verdicts


def _report(kind, study, schedule, n_max, rows, flags, policy_key=None) -> LimitStudyReport:
    factor, tolerance = VERDICT_POLICY[policy_key or kind.value]
    series, verdicts = evaluate_verdicts(_series(rows), factor, tolerance)
    return LimitStudyReport(
        kind=kind,
        study=study,
        schedule=schedule,
        n_max=n_max,
        tolerance=tolerance,
        factor=factor,
        series=series,
        verdicts=verdicts,
        flags=flags,
    )


def _log_point(kind, study, control, row):
    worst = max(row.values())
    logger.info(f"{kind.value} {study}: control={mp.nstr(control, 6)} worst error={mp.nstr(worst, 3)}")


@precise
def limit_value_study(
    kind: LimitKind, target: TargetParams, schedule: Sequence, n_max: int, sample_points: int = 10
) -> LimitStudyReport:
    """max over samples of |C_n u_n - target_n| / (1 + |target_n|) per control value and degree."""
    kind = LimitKind(kind)
    values = _check_schedule(kind, schedule)
    rows = []
    for control in values:
        transform = LimitTransform(kind=kind, target=target, control=control)
        pairs = transform.sample_map(sample_points)
        row = {}
        for n in range(n_max + 1):
            c_n = normalization_Cn(kind, target, control, n)
            if kind is LimitKind.TO_BIG_JACOBI:
                errors = [
                    relative_error(
                        c_n * racah_eval_transformed(target, transform.N, n, sigma), bigjacobi_eval(target, n, z)
                    )
                    for sigma, z in pairs
                ]
            else:
                rp = transform.racah_params()
                reference = dualhahn_eval if kind is LimitKind.TO_DUAL_HAHN else qhahn_eval
                errors = [
                    relative_error(c_n * racah_eval(rp, n, sigma), reference(target, n, s)) for sigma, s in pairs
                ]
            row[("value", n)] = max(errors)
        _log_point(kind, "value", control, row)
        rows.append(row)
    flags = [SAMPLE_FLAG] if kind is LimitKind.TO_BIG_JACOBI else []
    return _report(kind, "value", values, n_max, rows, flags)


def split_support(support: List[Tuple], M: int) -> List[Tuple]:
    """Offsets 0..M-1 (negative branch) followed by N, N-1, ..., M (positive branch)."""
    return support[:M] + support[M:][::-1]


@precise
def limit_orthogonality_study(
    kind: LimitKind, target: TargetParams, schedule: Sequence, n_max: int, sample_points: int = 10
) -> LimitStudyReport:
    """Weight limits, norm limits C_n^2 d_n^2 -> d~_n^2 and the rescaled Gram matrix."""
    kind = LimitKind(kind)
    values = _check_schedule(kind, schedule)
    rows = []
    for control in values:
        transform = LimitTransform(kind=kind, target=target, control=control)
        source, goal = transform.source_family(), transform.target_family()
        masses = dict(source.support())
        pairs = transform.sample_map(sample_points)
        row = {}
        if kind is LimitKind.TO_BIG_JACOBI:
            q = target.base.q
            scale, _ = transform.scale_shift()
            row[("weight", None)] = max(
                relative_error(
                    masses[sigma] / (scale * mp.power(q, -sigma) - target.c_t * mp.power(q, sigma + 1)),
                    (1 - q) * bigjacobi_weight(target, z),
                )
                for sigma, z in pairs
            )
            gram = gram_matrix(source, n_max, split_support(source.support(), math.ceil(transform.N / 2)))
            expected = [
                [goal.norm_sq(n) if n == m else mp.zero for m in range(n_max + 1)] for n in range(n_max + 1)
            ]
        else:
            target_masses = dict(goal.support())
            row[("weight", None)] = max(relative_error(masses[sigma], target_masses[s]) for sigma, s in pairs)
            gram = gram_matrix(source, n_max)
            expected = gram_matrix(goal, n_max)
        for n in range(n_max + 1):
            row[("norm", n)] = relative_error(source.norm_sq(n), goal.norm_sq(n))
        row[("gram", None)] = max(
            relative_error(gram[n][m], expected[n][m]) for n in range(n_max + 1) for m in range(n_max + 1)
        )
        _log_point(kind, "orthogonality", control, row)
        rows.append(row)
    flags = [SAMPLE_FLAG] if kind is LimitKind.TO_BIG_JACOBI else goal.flags()
    return _report(kind, "orthogonality", values, n_max, rows, flags)


@precise
def limit_ttrr_study(kind: LimitKind, target: TargetParams, schedule: Sequence, n_max: int) -> LimitStudyReport:
    """Rescaled q-Racah (beta_n, gamma_n) against the target closed forms."""
    kind = LimitKind(kind)
    values = _check_schedule(kind, schedule)
    rows = []
    goal = as_family(target)
    for control in values:
        source = LimitTransform(kind=kind, target=target, control=control).source_family()
        row = {}
        for n in range(n_max + 1):
            beta, gamma = source.ttrr(n)
            beta_t, gamma_t = goal.ttrr(n)
            row[("beta", n)] = relative_error(beta, beta_t)
            row[("gamma", n)] = relative_error(gamma, gamma_t)
        _log_point(kind, "ttrr", control, row)
        rows.append(row)
    return _report(kind, "ttrr", values, n_max, rows, goal.flags())


@precise
def limit_krall_study(
    target: BigJacobiParams, mass: MassPoints, schedule: Sequence, n_max: int, sample_points: int = 10
) -> LimitStudyReport:
    """Kernels, endpoint values, modified norms, modified TTRR and Delta_n along the big q-Jacobi limit."""
    kind = LimitKind.TO_BIG_JACOBI
    values = _check_schedule(kind, schedule)
    goal = KrallFamily(as_family(target), mass)
    rows = []
    for control in values:
        transform = LimitTransform(kind=kind, target=target, control=control)
        source = KrallFamily(transform.source_family(), mass)
        pairs = transform.sample_map(sample_points)
        row = {}
        for n in range(n_max + 1):
            row[("kernel", n)] = max(
                relative_error(kernel_sum(source.family, n, s1, s2), kernel_sum(goal.family, n, z1, z2))
                for i, (s1, z1) in enumerate(pairs)
                for s2, z2 in pairs[i:]
            )
            here, there = source.endpoint_values(n), goal.endpoint_values(n)
            row[("endpoint_left", n)] = relative_error(here[0], there[0])
            row[("endpoint_right", n)] = relative_error(here[1], there[1])
            row[("krall_norm", n)] = relative_error(
                krall_norm_sq(source.family, mass, n), krall_norm_sq(goal.family, mass, n)
            )
            _, beta, gamma = krall_ttrr_coeffs(source.family, mass, n)
            _, beta_t, gamma_t = krall_ttrr_coeffs(goal.family, mass, n)
            row[("krall_beta", n)] = relative_error(beta, beta_t)
            row[("krall_gamma", n)] = relative_error(gamma, gamma_t)
            row[("delta", n)] = relative_error(
                krall_delta(source.family, mass, n), krall_delta(goal.family, mass, n)
            )
        _log_point(kind, "krall", control, row)
        rows.append(row)
    return _report(kind, "krall", values, n_max, rows, goal.flags() + [SAMPLE_FLAG], policy_key="krall")


@precise
def run_limit_study(
    kind: LimitKind,
    target: TargetParams,
    schedule: Sequence,
    n_max: int,
    sample_points: int = 10,
    mass: Optional[MassPoints] = None,
) -> List[LimitStudyReport]:
    """Every study for a kind; the Krall study runs for big q-Jacobi when masses are given."""
    kind = LimitKind(kind)
    reports = [
        limit_value_study(kind, target, schedule, n_max, sample_points),
        limit_orthogonality_study(kind, target, schedule, n_max, sample_points),
        limit_ttrr_study(kind, target, schedule, n_max),
    ]
    if kind is LimitKind.TO_BIG_JACOBI and mass is not None:
        reports.append(limit_krall_study(target, mass, schedule, n_max, sample_points))
    return reports
