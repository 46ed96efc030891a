"""
Monic big q-Jacobi polynomials, orthogonal by the q-Jackson integral on
[c q, a q] (c < 0 < a).
"""

import logging
from typing import List, Tuple

from mpmath import mp

from ..config import current_precision, precise, settings
from ..errors import DenominatorZero, NonConvergence
from ..qcore import basic_hypergeometric_terminating, qpochhammer, qpochhammer_inf
from ..schemas import BigJacobiParams, OrthogonalityReport
from ..utils import is_negligible
from .base import OrthogonalFamily, orthogonality_report

logger = logging.getLogger(__name__)

ENDPOINT_FLAG = "right endpoint Krall value uses P_n(aq), not P_n(cq)"


def _ttrr_parts(params: BigJacobiParams, n: int):
    q = params.base.q
    a, b, c = params.a_t, params.b_t, params.c_t
    ab = a * b
    upper = (
        (1 - a * mp.power(q, n + 1))
        * (1 - ab * mp.power(q, n + 1))
        * (1 - c * mp.power(q, n + 1))
        / ((1 - ab * mp.power(q, 2 * n + 1)) * (1 - ab * mp.power(q, 2 * n + 2)))
    )
    if n == 0:
        return upper, mp.zero
    lower = (
        -a * c * mp.power(q, n + 1)
        * (1 - mp.power(q, n))
        * (1 - ab * mp.power(q, n) / c)
        * (1 - b * mp.power(q, n))
        / ((1 - ab * mp.power(q, 2 * n)) * (1 - ab * mp.power(q, 2 * n + 1)))
    )
    return upper, lower


@precise
def bigjacobi_ttrr_coeffs(params: BigJacobiParams, n: int) -> Tuple:
    """(beta_n, gamma_n) of z P_n = P_{n+1} + beta_n P_n + gamma_n P_{n-1}."""
    upper, lower = _ttrr_parts(params, n)
    beta = 1 - upper - lower
    gamma = _ttrr_parts(params, n - 1)[0] * lower if n else mp.zero
    return beta, gamma


def _by_recurrence(params: BigJacobiParams, n: int, z):
    previous, current = mp.zero, mp.one
    for k in range(n):
        beta, gamma = bigjacobi_ttrr_coeffs(params, k)
        previous, current = current, (z - beta) * current - gamma * previous
    return current


@precise
def bigjacobi_eval(params: BigJacobiParams, n: int, z):
    """
    Monic P_n(z; a, b, c; q) from the 3phi2 representation.

    The denominators b q and c q never meet q^-k for admissible parameters,
    so the plain terminating series is summed directly.

    At z = 0 the series argument q c / z is singular and the value is taken
    from the three-term recurrence instead.
    """
    if n == 0:
        return mp.one
    z = mp.mpf(z)
    if z == 0:
        return _by_recurrence(params, n, z)
    base = params.base
    q = base.q
    a, b, c = params.a_t, params.b_t, params.c_t
    leading = qpochhammer(a * b * mp.power(q, n + 1), base, n)
    if is_negligible(leading):
        raise DenominatorZero(f"(a b q^(n+1);q)_n vanishes at n = {n}")
    numerators = [mp.power(q, -n), a * b * mp.power(q, n + 1), q * c / z]
    series = basic_hypergeometric_terminating(numerators, [q * b, q * c], base, z / a, n)
    scale = qpochhammer([q * b, q * c], base, n) / leading
    return mp.power(-a, n) * mp.power(q, n * (n + 1) // 2) * scale * series


@precise
def bigjacobi_weight(params: BigJacobiParams, z):
    """rho~(z), normalized to unit q-Jackson integral over [c q, a q]."""
    base = params.base
    q = base.q
    a, b, c = params.a_t, params.b_t, params.c_t
    z = mp.mpf(z)
    shape = qpochhammer_inf(z / a, base) * qpochhammer_inf(z / c, base) / (
        qpochhammer_inf(z, base) * qpochhammer_inf(b * z / c, base)
    )
    total = a * q * (1 - q) * mp.fprod(
        qpochhammer_inf(x, base) for x in (q, a * b * q * q, c / a, a * q / c)
    ) / mp.fprod(qpochhammer_inf(x, base) for x in (a * q, b * q, c * q, a * b * q / c))
    return shape / total


def _branch(params: BigJacobiParams, t) -> List[Tuple]:
    q = params.base.q
    b, c = params.b_t, params.c_t
    tol = current_precision().trunc_tol
    cap = settings.max_support_points
    point = t
    mass = (1 - q) * abs(t) * bigjacobi_weight(params, t)
    nodes = [(point, mass)]
    total = mass
    while mass >= tol * total:
        if len(nodes) >= cap:
            raise NonConvergence(f"big q-Jacobi branch at t={mp.nstr(t, 8)} needs more than {cap} points")
        ratio = (1 - point) * (1 - b * point / c) / ((1 - point / params.a_t) * (1 - point / c))
        point = point * q
        mass = mass * q * ratio
        nodes.append((point, mass))
        total += mass
    logger.debug(f"big q-Jacobi branch at t={mp.nstr(t, 8)} truncated at {len(nodes)} points")
    return nodes


@precise
def bigjacobi_support(params: BigJacobiParams) -> List[Tuple]:
    """
    (z, mass) over c q^(s+1) followed by a q^(s+1), with mass the q-Jackson
    weight (1-q)|z| rho~(z); each branch is cut once its masses drop below
    trunc_tol of the branch total.
    """
    q = params.base.q
    return _branch(params, params.c_t * q) + _branch(params, params.a_t * q)


@precise
def bigjacobi_norm_sq(params: BigJacobiParams, n: int):
    base = params.base
    q = base.q
    a, b, c = params.a_t, params.b_t, params.c_t
    ab = a * b
    ratio = (1 - ab * q) / (1 - ab * mp.power(q, 2 * n + 1))
    top = qpochhammer([q, b * q, a * q, c * q, ab * q / c], base, n)
    bottom = qpochhammer([ab * q, ab * mp.power(q, n + 1), ab * mp.power(q, n + 1)], base, n)
    return ratio * top / bottom * mp.power(-a * c * q * q, n) * mp.power(q, n * (n - 1) // 2)


class BigJacobiFamily(OrthogonalFamily):
    name = "bigjacobi"
    krall_notes = (ENDPOINT_FLAG,)

    def __init__(self, params: BigJacobiParams):
        super().__init__()
        self.params = params

    @property
    def base(self):
        return self.params.base

    def _evaluate(self, n, point):
        return bigjacobi_eval(self.params, n, point)

    def abscissa(self, point):
        return point

    def norm_sq(self, n):
        self.check_degree(n)
        return bigjacobi_norm_sq(self.params, n)

    def ttrr(self, n):
        return bigjacobi_ttrr_coeffs(self.params, n)

    def _build_support(self):
        return bigjacobi_support(self.params)

    def endpoints(self):
        q = self.params.base.q
        return self.params.c_t * q, self.params.a_t * q


@precise
def bigjacobi_orthogonality_report(params: BigJacobiParams, n_max: int) -> OrthogonalityReport:
    return orthogonality_report(BigJacobiFamily(params), n_max)
