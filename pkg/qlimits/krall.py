"""
Krall-type modifications: the classical functional plus point masses A and B
at the two endpoints of the support.

Everything is expressed through the reproducing kernels of the classical
family, so the same code serves q-Racah, its scaled limit form and big
q-Jacobi.
"""

import logging
from typing import Tuple

from mpmath import mp

from .config import precise
from .errors import CoincidentPoints, SingularModification
from .families import OrthogonalFamily, as_family, orthogonality_report
from .schemas import KernelValue, MassPoints, OrthogonalityReport
from .utils import is_negligible, relative_error

logger = logging.getLogger(__name__)

CD_FLAG = "Christoffel-Darboux form taken with alpha_n = 1 (monic recurrence)"


def _resolve(family) -> OrthogonalFamily:
    return family if isinstance(family, OrthogonalFamily) else as_family(family)


# ---------- Kernels ----------
def kernel_sum(family: OrthogonalFamily, n: int, s1, s2):
    """K_n(s1, s2) = sum_{k<=n} p_k(s1) p_k(s2) / d_k^2; K_{-1} = 0."""
    return mp.fsum(
        family.evaluate(k, s1) * family.evaluate(k, s2) / family.norm_sq(k) for k in range(n + 1)
    )


@precise
def christoffel_darboux(family, n: int, s1, s2):
    """(p_{n+1}(s1) p_n(s2) - p_{n+1}(s2) p_n(s1)) / (d_n^2 (x(s1) - x(s2)))."""
    family = _resolve(family)
    gap = family.abscissa(s1) - family.abscissa(s2)
    if gap == 0:
        raise CoincidentPoints(f"Christoffel-Darboux form needs distinct points, got {s1} and {s2}")
    cross = family.evaluate(n + 1, s1) * family.evaluate(n, s2) - family.evaluate(n + 1, s2) * family.evaluate(n, s1)
    return cross / (family.norm_sq(n) * gap)


@precise
def kernel(family, n: int, s1, s2) -> KernelValue:
    """Definition-side kernel, cross-checked by the Christoffel-Darboux form when the points differ."""
    family = _resolve(family)
    family.check_degree(n)
    value = kernel_sum(family, n, s1, s2)
    if family.abscissa(s1) == family.abscissa(s2):
        return KernelValue(n=n, s1=s1, s2=s2, value=value)
    cd_value = christoffel_darboux(family, n, s1, s2)
    return KernelValue(
        n=n, s1=s1, s2=s2, value=value, cd_value=cd_value, cd_residual=relative_error(cd_value, value)
    )


@precise
def kernel_reproducing_residual(family, n: int, t):
    """max_{m<=n} |sum_s K_n(s, t) p_m(s) w(s) - p_m(t)| / (1 + |p_m(t)|) on the classical form."""
    family = _resolve(family)
    support = family.support()
    kernels = [kernel_sum(family, n, point, t) for point, _ in support]
    worst = mp.zero
    for m in range(n + 1):
        value = mp.fsum(k * family.evaluate(m, point) * w for k, (point, w) in zip(kernels, support))
        worst = max(worst, relative_error(value, family.evaluate(m, t)))
    return worst


# ---------- Modified polynomials ----------
def _endpoint_kernels(family: OrthogonalFamily, m: int):
    left, right = family.endpoints()
    return (
        kernel_sum(family, m, left, left),
        kernel_sum(family, m, right, right),
        kernel_sum(family, m, left, right),
    )


def _kappa(mass: MassPoints, k_ll, k_rr, k_lr):
    return (1 + mass.A * k_ll) * (1 + mass.B * k_rr) - mass.A * mass.B * k_lr ** 2


@precise
def kappa(family, mass: MassPoints, m: int):
    """kappa_m = (1 + A K_m(l,l)) (1 + B K_m(r,r)) - A B K_m(l,r)^2; kappa_{-1} = 1."""
    return _kappa(mass, *_endpoint_kernels(_resolve(family), m))


def _endpoint_values(family: OrthogonalFamily, mass: MassPoints, n: int) -> Tuple:
    left, right = family.endpoints()
    k_ll, k_rr, k_lr = _endpoint_kernels(family, n - 1)
    det = _kappa(mass, k_ll, k_rr, k_lr)
    if is_negligible(det):
        raise SingularModification(f"{family.name}: kappa_{n - 1} vanishes, masses are not quasi-definite at n = {n}")
    p_left, p_right = family.evaluate(n, left), family.evaluate(n, right)
    return (
        ((1 + mass.B * k_rr) * p_left - mass.B * k_lr * p_right) / det,
        ((1 + mass.A * k_ll) * p_right - mass.A * k_lr * p_left) / det,
    )


@precise
def krall_endpoint_values(family, mass: MassPoints, n: int) -> Tuple:
    """Values of the modified polynomial of degree n at the left and right mass points."""
    return _endpoint_values(_resolve(family), mass, n)


def _modified_value(family: OrthogonalFamily, mass: MassPoints, n: int, point, ends: Tuple):
    if n == 0:
        return mp.one
    left, right = family.endpoints()
    return (
        family.evaluate(n, point)
        - mass.A * ends[0] * kernel_sum(family, n - 1, point, left)
        - mass.B * ends[1] * kernel_sum(family, n - 1, point, right)
    )


@precise
def krall_eval(family, mass: MassPoints, n: int, point):
    """p_n(x) - A p~_n(l) K_{n-1}(x, l) - B p~_n(r) K_{n-1}(x, r)."""
    family = _resolve(family)
    if n == 0:
        return mp.one
    return _modified_value(family, mass, n, point, _endpoint_values(family, mass, n))


@precise
def krall_norm_sq(family, mass: MassPoints, n: int):
    family = _resolve(family)
    left, right = family.endpoints()
    k_ll, k_rr, k_lr = _endpoint_kernels(family, n - 1)
    det = _kappa(mass, k_ll, k_rr, k_lr)
    if is_negligible(det):
        raise SingularModification(f"{family.name}: kappa_{n - 1} vanishes at n = {n}")
    p_left, p_right = family.evaluate(n, left), family.evaluate(n, right)
    A, B = mass.A, mass.B
    correction = (
        A * p_left ** 2 * (1 + B * k_rr)
        + B * p_right ** 2 * (1 + A * k_ll)
        - 2 * A * B * p_left * p_right * k_lr
    )
    return family.norm_sq(n) + correction / det


@precise
def krall_delta(family, mass: MassPoints, n: int):
    """Delta_n = (A p~_n(l) p_n(l) + B p~_n(r) p_n(r)) / d_n^2; Delta_0 = A + B."""
    family = _resolve(family)
    left, right = family.endpoints()
    ends = _endpoint_values(family, mass, n)
    return (
        mass.A * ends[0] * family.evaluate(n, left) + mass.B * ends[1] * family.evaluate(n, right)
    ) / family.norm_sq(n)


@precise
def krall_ttrr_coeffs(family, mass: MassPoints, n: int) -> Tuple:
    """(1, beta~_n, gamma~_n) of the modified monic recurrence."""
    family = _resolve(family)
    left, right = family.endpoints()
    beta, gamma = family.ttrr(n)
    now = _endpoint_values(family, mass, n)
    nxt = _endpoint_values(family, mass, n + 1)
    d_n = family.norm_sq(n)

    def shift(index, point):
        lower = now[index] * family.evaluate(n - 1, point) / family.norm_sq(n - 1) if n else mp.zero
        return lower - nxt[index] * family.evaluate(n, point) / d_n

    beta_mod = beta - mass.A * shift(0, left) - mass.B * shift(1, right)
    if n == 0:
        return mp.one, beta_mod, mp.zero
    ratio = (1 + krall_delta(family, mass, n)) / (1 + krall_delta(family, mass, n - 1))
    return mp.one, beta_mod, gamma * ratio


class KrallFamily(OrthogonalFamily):
    """A classical family with point masses A, B added at its endpoints."""

    def __init__(self, family, mass: MassPoints):
        super().__init__()
        self.family = _resolve(family)
        self.mass = mass
        self.name = f"{self.family.name}-krall"
        self.max_degree = self.family.max_degree
        self.max_eval_degree = self.family.max_eval_degree
        self._ends = (None, {})

    @property
    def base(self):
        return self.family.base

    def endpoint_values(self, n: int) -> Tuple:
        prec, ends = self._ends
        if prec != mp.prec:
            ends = {}
            self._ends = (mp.prec, ends)
        if n not in ends:
            ends[n] = _endpoint_values(self.family, self.mass, n)
        return ends[n]

    def _evaluate(self, n, point):
        if n == 0:
            return mp.one
        return _modified_value(self.family, self.mass, n, point, self.endpoint_values(n))

    def abscissa(self, point):
        return self.family.abscissa(point)

    def norm_sq(self, n):
        self.check_degree(n)
        return krall_norm_sq(self.family, self.mass, n)

    def ttrr(self, n):
        _, beta, gamma = krall_ttrr_coeffs(self.family, self.mass, n)
        return beta, gamma

    def _build_support(self):
        left, right = self.family.endpoints()
        support = []
        for point, weight in self.family.support():
            if point == left:
                weight = weight + self.mass.A
            if point == right:
                weight = weight + self.mass.B
            support.append((point, weight))
        return support

    def endpoints(self):
        return self.family.endpoints()

    def flags(self):
        return self.family.flags() + list(self.family.krall_notes) + [CD_FLAG]


@precise
def krall_orthogonality_report(family, mass: MassPoints, n_max: int) -> OrthogonalityReport:
    """Gram matrix of the modified polynomials under the classical form plus the two masses."""
    modified = KrallFamily(family, mass)
    logger.debug(f"{modified.name}: A={mp.nstr(mass.A, 6)} B={mp.nstr(mass.B, 6)}, n_max={n_max}")
    return orthogonality_report(modified, n_max)
