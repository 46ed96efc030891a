"""
Non-standard q-Racah polynomials on the lattice mu(s) = [s]_q [s+1]_q.

All formulas are written on the integer offsets sigma = s - a and only use
q^alpha, q^beta and q^(2a), so the same code serves the standard regime and
the transformed regime where q^(2a) < 0. The monic polynomial in the
normalized abscissa x(sigma) = q^-sigma + q^(2a) q^(sigma+1) is the working
form; u_n in mu is recovered as lambda^n times it.
"""

import functools
import logging
from typing import List, Tuple

from mpmath import mp

from ..config import precise
from ..errors import DegreeError, DenominatorZero, ParameterError, PoleError
from ..qcore import cleared_series, qgamma_tilde, qnum, qpochhammer
from ..schemas import BigJacobiParams, OrthogonalityReport, QBase, RacahLattice, RacahParams, RacahRegime
from ..utils import is_negligible
from .base import OrthogonalFamily, orthogonality_report

logger = logging.getLogger(__name__)

NORMALIZATION_FLAG = "probability normalization read as sum rho(s) * Delta mu(s-1/2) = 1"
BOUNDARY_FLAG = "beta_{N-1}, gamma_{N-1} taken from the closed forms although u_N leaves the family"


# ---------- Lattice ----------
def _c1_c3(base: QBase):
    kappa_sq = base.kappa_q ** 2
    root = mp.sqrt(base.q)
    return root / kappa_sq, -(1 + base.q) / (root * kappa_sq)


@precise
def racah_lattice(params: RacahParams) -> RacahLattice:
    c1, c3 = _c1_c3(params.base)
    return RacahLattice(c1=c1, c3=c3, grid=list(range(params.N)))


@precise
def lattice_mu(base: QBase, s):
    """c1 (q^s + q^(-s-1)) + c3 at real s; equals [s]_q [s+1]_q."""
    c1, c3 = _c1_c3(base)
    return c1 * (mp.power(base.q, s) + mp.power(base.q, -s - 1)) + c3


def _require_standard(params: RacahParams, what: str):
    if params.regime is not RacahRegime.STANDARD:
        raise ParameterError(f"{what} is only real in the standard regime")


def _check_sigma(params: RacahParams, sigma: int, upper: int = None):
    upper = params.N - 1 if upper is None else upper
    if not 0 <= sigma <= upper:
        raise ParameterError(f"lattice offset sigma = {sigma} outside 0..{upper}")


def _lambda(params: RacahParams):
    return 1 / (params.base.kappa_q ** 2 * mp.sqrt(params.base.q * params.q_2a))


@precise
def racah_x_hat(params: RacahParams, sigma):
    q = params.base.q
    return mp.power(q, -sigma) + params.q_2a * mp.power(q, sigma + 1)


@precise
def racah_mu(params: RacahParams, sigma):
    """mu(a + sigma) = lambda x(sigma) + c3."""
    _require_standard(params, "mu(s)")
    _, c3 = _c1_c3(params.base)
    return _lambda(params) * racah_x_hat(params, sigma) + c3


@precise
def racah_delta_mu(params: RacahParams, sigma):
    """Delta mu(s - 1/2) = [2s+1]_q at s = a + sigma."""
    _require_standard(params, "Delta mu")
    q = params.base.q
    return (
        (params.q_2a * mp.power(q, 2 * sigma + 1) - 1)
        / (mp.sqrt(params.q_2a) * mp.power(q, sigma + mp.mpf(1) / 2) * params.base.kappa_q)
    )


# ---------- Evaluation ----------
def _p_hat(params: RacahParams, n: int, sigma: int):
    base = params.base
    q = base.q
    Q = params.q_alpha * params.q_beta
    leading = qpochhammer(Q * mp.power(q, n + 1), base, n)
    if is_negligible(leading):
        raise DenominatorZero(f"(q^(alpha+beta+n+1);q)_n vanishes at n = {n}")
    numerators = [mp.power(q, -n), Q * mp.power(q, n + 1), mp.power(q, -sigma), params.q_2a * mp.power(q, sigma + 1)]
    denominators = [
        params.q_beta * q,
        params.q_alpha * params.q_2a * mp.power(q, params.N + 1),
        mp.power(q, 1 - params.N),
    ]
    return cleared_series(numerators, denominators, base, q, n) / leading


@precise
def racah_eval_normalized(params: RacahParams, n: int, sigma: int):
    """Monic q-Racah polynomial of degree n in x(sigma); real in every regime."""
    if not 0 <= n <= params.N:
        raise DegreeError(f"q-Racah degree {n} outside 0..{params.N}")
    _check_sigma(params, sigma)
    return _p_hat(params, n, sigma)


@precise
def racah_eval(params: RacahParams, n: int, sigma: int):
    """
    u_n(mu(s), a, b)_q at s = a + sigma.

    Args:
        params: standard-regime q-Racah parameters
        n: degree, 0 <= n <= N
        sigma: lattice offset, 0 <= sigma <= N-1

    Returns:
        The monic polynomial value; the Pochhammer pair in s enters only
        through q^-sigma and q^(2a) q^(sigma+1).
    """
    _require_standard(params, "racah_eval")
    return mp.power(_lambda(params), n) * racah_eval_normalized(params, n, sigma)


@precise
def racah_eval_transformed(bj: BigJacobiParams, N: int, n: int, sigma: int):
    """
    u_n on the transformed lattice mu~(sigma) = q^(N+1) a q^-sigma + c q^(sigma+1),
    built from the big q-Jacobi parameters only.

    The formal factor (q^-N c/a)^(-n/2) is left out; normalization_Cn pairs
    with this value so that their product is real.
    """
    if N < 1:
        raise ParameterError(f"N must be >= 1, got {N}")
    if not 0 <= n <= N:
        raise DegreeError(f"q-Racah degree {n} outside 0..{N}")
    if not 0 <= sigma <= N:
        raise ParameterError(f"lattice offset sigma = {sigma} outside 0..{N}")
    base = bj.base
    q, kappa = base.q, base.kappa_q
    a_t, b_t, c_t = bj.a_t, bj.b_t, bj.c_t
    top = mp.power(q, N + 1)
    q_minus_N = mp.power(q, -N)

    leading = qpochhammer(a_t * b_t * mp.power(q, n + 1), base, n)
    if is_negligible(leading):
        raise DenominatorZero(f"(a b q^(n+1);q)_n vanishes at n = {n}")
    prefactor = qpochhammer([q_minus_N, b_t * q, c_t * q], base, n) / (mp.power(kappa, 2 * n) * leading)

    mu_t = top * a_t * mp.power(q, -sigma) + c_t * mp.power(q, sigma + 1)
    terms = []
    product = mp.one
    for k in range(n + 1):
        if k:
            product *= mu_t - c_t * mp.power(q, k) - a_t * mp.power(q, N + 2 - k)
        ratio = qpochhammer([mp.power(q, -n), a_t * b_t * mp.power(q, n + 1)], base, k) / qpochhammer(
            [b_t * q, c_t * q, q, q_minus_N], base, k
        )
        sign = -1 if k % 2 else 1
        terms.append(
            ratio * mp.power(q, k) * sign * mp.power(q, k * (k - 1) // 2)
            / (mp.power(top, k) * mp.power(a_t, k)) * product
        )
    return prefactor * mp.fsum(terms)


# ---------- Weight ----------
@precise
def racah_masses(params: RacahParams) -> List:
    """
    rho(s) Delta mu(s-1/2) on sigma = 0..N-1, scaled to total mass 1.

    Built by the first-order ratio recursion of the weight, which is real
    in both regimes. The recursion runs once per parameter set and precision.
    """
    return list(_masses_at(params, mp.prec))


@functools.lru_cache(maxsize=64)
def _masses_at(params: RacahParams, prec: int) -> Tuple:
    q = params.base.q
    qa, qb, q2a, N = params.q_alpha, params.q_beta, params.q_2a, params.N
    masses = [mp.one]
    for sigma in range(N - 1):
        top = (
            (1 - q2a * mp.power(q, 2 * sigma + 3))
            * (1 - q2a * mp.power(q, sigma + 1))
            * (1 - qb * mp.power(q, sigma + 1))
            * (1 - q2a * qa * mp.power(q, N + sigma + 1))
            * (1 - mp.power(q, N - sigma - 1))
        )
        bottom = (
            (1 - q2a * mp.power(q, 2 * sigma + 1))
            * (1 - mp.power(q, sigma + 1))
            * (1 - q2a * mp.power(q, N + sigma + 1))
            * q * (qb - q2a * mp.power(q, sigma + 1))
            * (1 - qa * mp.power(q, N - sigma - 1))
        )
        if is_negligible(bottom):
            raise ParameterError(f"q-Racah weight recursion hits a pole at sigma = {sigma + 1}")
        masses.append(masses[-1] * top / bottom)
    total = mp.fsum(masses)
    return tuple(m / total for m in masses)


@precise
def racah_weight(params: RacahParams, sigma: int):
    """rho(a + sigma), normalized so that sum rho(s) [2s+1]_q = 1."""
    _require_standard(params, "racah_weight")
    _check_sigma(params, sigma)
    return racah_masses(params)[sigma] / racah_delta_mu(params, sigma)


@precise
def racah_weight_closed_form(params: RacahParams, sigma: int):
    """rho(a + sigma) straight from the q-Gamma ratio."""
    _require_standard(params, "racah_weight_closed_form")
    _check_sigma(params, sigma)
    base = params.base
    ex = params.exponents()
    a, b, alpha, beta = ex["a"], ex["b"], ex["alpha"], ex["beta"]
    s = a + sigma
    upper = [
        s + a + 1, s - a + beta + 1, s + alpha + b + 1, b + alpha - s,
        alpha + beta + 2, b - a, a + b - beta,
    ]
    lower = [
        s - a + 1, s + b + 1, s + a - beta + 1, b - s,
        alpha + 1, beta + 1, b - a + alpha + beta + 1, a + b + alpha + 1,
    ]
    try:
        return mp.fprod(qgamma_tilde(x, base) for x in upper) / mp.fprod(qgamma_tilde(x, base) for x in lower)
    except PoleError as exc:
        raise ParameterError(f"q-Racah weight has a q-Gamma pole at sigma = {sigma}") from exc


# ---------- Norms and recurrence ----------
@precise
def racah_norm_sq(params: RacahParams, n: int):
    """d_n^2 of u_n with respect to the normalized weight."""
    if not 0 <= n <= params.N - 1:
        raise DegreeError(f"q-Racah norm needs 0 <= n <= {params.N - 1}, got {n}")
    return mp.power(_lambda(params), 2 * n) * _p_hat_norm_sq(params, n)


def _p_hat_norm_sq(params: RacahParams, n: int):
    base = params.base
    q = base.q
    qa, qb, q2a, N = params.q_alpha, params.q_beta, params.q_2a, params.N
    Q = qa * qb
    qN = mp.power(q, N)
    top = qpochhammer(
        [q, qa * q, qb * q, qN * Q * q, q2a * qN * qa * q, mp.power(q, 1 - N), qb * q / (q2a * qN)],
        base,
        n,
    )
    bottom = qpochhammer(Q * q * q, base, 2 * n) * qpochhammer(Q * mp.power(q, n + 1), base, n)
    return top * mp.power(q * q2a, n) / bottom


def _kls_a(params: RacahParams, n: int):
    q = params.base.q
    qa, qb, q2a, N = params.q_alpha, params.q_beta, params.q_2a, params.N
    Q = qa * qb
    return (
        (1 - qb * mp.power(q, n + 1))
        * (1 - Q * mp.power(q, n + 1))
        * (1 - qa * q2a * mp.power(q, N + n + 1))
        * (1 - mp.power(q, n + 1 - N))
        / ((1 - Q * mp.power(q, 2 * n + 1)) * (1 - Q * mp.power(q, 2 * n + 2)))
    )


def _kls_c(params: RacahParams, n: int):
    if n == 0:
        return mp.zero
    q = params.base.q
    qa, qb, q2a, N = params.q_alpha, params.q_beta, params.q_2a, params.N
    Q = qa * qb
    return (
        q
        * (1 - mp.power(q, n))
        * (1 - qa * mp.power(q, n))
        * (mp.power(q, -N) - Q * mp.power(q, n))
        * (q2a * mp.power(q, N) - qb * mp.power(q, n))
        / ((1 - Q * mp.power(q, 2 * n)) * (1 - Q * mp.power(q, 2 * n + 1)))
    )


@precise
def racah_ttrr_normalized(params: RacahParams, n: int) -> Tuple:
    """(beta_n, gamma_n) of the monic polynomials in x(sigma)."""
    if not 0 <= n <= params.N - 1:
        raise DegreeError(f"q-Racah TTRR needs 0 <= n <= {params.N - 1}, got {n}")
    if n == params.N - 1:
        logger.debug(f"q-Racah TTRR at boundary degree n = {n}; u_{params.N} leaves the family")
    beta = 1 + params.q_2a * params.base.q - _kls_a(params, n) - _kls_c(params, n)
    gamma = _kls_a(params, n - 1) * _kls_c(params, n) if n else mp.zero
    return beta, gamma


@precise
def racah_ttrr_coeffs(params: RacahParams, n: int) -> Tuple:
    """(beta_n, gamma_n) of mu u_n = u_{n+1} + beta_n u_n + gamma_n u_{n-1}, in q-numbers."""
    _require_standard(params, "racah_ttrr_coeffs")
    if not 0 <= n <= params.N - 1:
        raise DegreeError(f"q-Racah TTRR needs 0 <= n <= {params.N - 1}, got {n}")
    if n == params.N - 1:
        logger.debug(f"q-Racah TTRR at boundary degree n = {n}; u_{params.N} leaves the family")
    base = params.base
    ex = params.exponents()
    a, b, al, be = ex["a"], ex["b"], ex["alpha"], ex["beta"]

    def br(x):
        return qnum(x, base)

    s = al + be
    beta = br(a) * br(a + 1) - (
        br(s + n + 1) * br(a - b + n + 1) * br(be + n + 1) * br(a + b + al + n + 1)
        / (br(s + 2 * n + 1) * br(s + 2 * n + 2))
    )
    if n == 0:
        return beta, mp.zero
    beta -= (
        br(al + n) * br(b - a + s + n) * br(-a - b + be + n) * br(n)
        / (br(s + 2 * n) * br(s + 2 * n + 1))
    )
    gamma = (
        br(n) * br(s + n) * br(al + n) * br(be + n)
        * br(b - a + s + n) * br(-a - b + be + n) * br(a - b + n) * br(a + b + al + n)
        / (br(s + 2 * n - 1) * br(s + 2 * n) ** 2 * br(s + 2 * n + 1))
    )
    return beta, gamma


# ---------- Families ----------
class RacahFamily(OrthogonalFamily):
    """u_n on the lattice mu(a + sigma), sigma = 0..N-1, standard regime."""

    name = "racah"

    def __init__(self, params: RacahParams):
        super().__init__()
        _require_standard(params, "RacahFamily")
        self.params = params
        self.max_degree = params.N - 1
        self.max_eval_degree = params.N

    @property
    def base(self):
        return self.params.base

    def _evaluate(self, n, point):
        return racah_eval(self.params, n, point)

    def abscissa(self, point):
        return racah_mu(self.params, point)

    def norm_sq(self, n):
        return racah_norm_sq(self.params, n)

    def ttrr(self, n):
        return racah_ttrr_coeffs(self.params, n)

    def _build_support(self):
        return list(enumerate(racah_masses(self.params)))

    def endpoints(self):
        return 0, self.params.N - 1

    def flags(self):
        return [NORMALIZATION_FLAG, BOUNDARY_FLAG]


class ScaledRacahFamily(OrthogonalFamily):
    """
    {L^n p_n} as a monic family in L x(sigma) + shift.

    The q-Racah side of every limit transition; the scale and shift absorb
    C_n and the affine change of lattice.
    """

    name = "racah-scaled"

    def __init__(self, params: RacahParams, scale=1, shift=0):
        super().__init__()
        self.params = params
        self.scale = mp.mpf(scale)
        self.shift = mp.mpf(shift)
        self.max_degree = params.N - 1
        self.max_eval_degree = params.N

    @property
    def base(self):
        return self.params.base

    def _evaluate(self, n, point):
        return mp.power(self.scale, n) * racah_eval_normalized(self.params, n, point)

    def abscissa(self, point):
        return self.scale * racah_x_hat(self.params, point) + self.shift

    def norm_sq(self, n):
        self.check_degree(n)
        return mp.power(self.scale, 2 * n) * _p_hat_norm_sq(self.params, n)

    def ttrr(self, n):
        beta, gamma = racah_ttrr_normalized(self.params, n)
        return self.scale * beta + self.shift, self.scale ** 2 * gamma

    def _build_support(self):
        return list(enumerate(racah_masses(self.params)))

    def endpoints(self):
        return 0, self.params.N - 1

    def flags(self):
        return [BOUNDARY_FLAG]


@precise
def racah_orthogonality_report(params: RacahParams, n_max: int) -> OrthogonalityReport:
    return orthogonality_report(RacahFamily(params), n_max)
