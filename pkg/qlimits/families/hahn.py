"""
Monic dual q-Hahn and q-Hahn polynomials on s = 0..N.

Both weights are returned together with the lattice mesh Delta x(s - 1/2);
their product is the discrete orthogonality mass and sums to 1 over the grid.
"""

from typing import Tuple

from mpmath import mp

from ..config import precise
from ..errors import DegreeError, DenominatorZero, ParameterError
from ..qcore import cleared_series, qpochhammer
from ..schemas import DualHahnParams, OrthogonalityReport, QHahnParams
from ..utils import is_negligible
from .base import OrthogonalFamily, orthogonality_report

DUAL_DELTA_FLAG = "dual q-Hahn orthogonality taken with the Kronecker delta_nm"
QHAHN_GAMMA_FLAG = "q-Hahn gamma_n uses the factor (1-q^(n-N-1)), not (1-q^(n-N))"


def _check_grid(N: int, n: int, s: int):
    if not 0 <= n <= N:
        raise DegreeError(f"degree {n} outside 0..{N}")
    if not 0 <= s <= N:
        raise ParameterError(f"grid point s = {s} outside 0..{N}")


# ---------- Dual q-Hahn ----------
@precise
def dualhahn_x(params: DualHahnParams, s):
    q = params.base.q
    return mp.power(q, -s) + params.gamma * params.delta * mp.power(q, s + 1)


@precise
def dualhahn_eval(params: DualHahnParams, n: int, s: int):
    """(gamma q, q^-N; q)_n 3phi2(q^-n, q^-s, gamma delta q^(s+1); gamma q, q^-N | q, q)."""
    _check_grid(params.N, n, s)
    q = params.base.q
    gd = params.gamma * params.delta
    numerators = [mp.power(q, -n), mp.power(q, -s), gd * mp.power(q, s + 1)]
    return cleared_series(numerators, [params.gamma * q, mp.power(q, -params.N)], params.base, q, n)


def _dualhahn_rho(params: DualHahnParams, s: int):
    base = params.base
    q, kappa = base.q, base.kappa_q
    g, d, N = params.gamma, params.delta, params.N
    gd = g * d
    constant = mp.power(g * q, N) * qpochhammer(d * q, base, N) / qpochhammer(gd * q * q, base, N)
    shape = qpochhammer([g * q, gd * q, mp.power(q, -N)], base, s) / qpochhammer(
        [q, gd * mp.power(q, N + 2), d * q], base, s
    )
    return (
        constant * mp.power(q, N * s - s * (s - 1) // 2) * shape
        / (-kappa * (1 - gd * q) * mp.power(-g, s))
    )


def _dualhahn_norm_sq(params: DualHahnParams, n: int):
    base = params.base
    q, g, d, N = base.q, params.gamma, params.delta, params.N
    q_minus_N = mp.power(q, -N)
    return mp.power(g * d * q, n) * qpochhammer([q, q_minus_N, g * q, q_minus_N / d], base, n)


def _dualhahn_delta_x(params: DualHahnParams, s: int):
    q = params.base.q
    gd = params.gamma * params.delta
    return -params.base.kappa_q * mp.power(q, -s) * (1 - gd * mp.power(q, 2 * s + 1))


@precise
def dualhahn_weight_norm(params: DualHahnParams, n: int, s: int) -> Tuple:
    """(rho~(s), d~_n^2, Delta x(s - 1/2))."""
    _check_grid(params.N, n, s)
    return _dualhahn_rho(params, s), _dualhahn_norm_sq(params, n), _dualhahn_delta_x(params, s)


@precise
def dualhahn_ttrr_coeffs(params: DualHahnParams, n: int) -> Tuple:
    if not 0 <= n <= params.N:
        raise DegreeError(f"dual q-Hahn TTRR needs 0 <= n <= {params.N}, got {n}")
    q, g, d, N = params.base.q, params.gamma, params.delta, params.N
    beta = (
        1 + g * d * q
        - (1 - g * mp.power(q, n + 1)) * (1 - mp.power(q, n - N))
        - g * q * (d - mp.power(q, n - N - 1)) * (1 - mp.power(q, n))
    )
    gamma = (
        g * q
        * (1 - mp.power(q, n))
        * (d - mp.power(q, n - N - 1))
        * (1 - mp.power(q, n - N - 1))
        * (1 - g * mp.power(q, n))
    )
    return beta, gamma


class DualHahnFamily(OrthogonalFamily):
    name = "dualhahn"

    def __init__(self, params: DualHahnParams):
        super().__init__()
        self.params = params
        self.max_degree = params.N
        self.max_eval_degree = params.N

    @property
    def base(self):
        return self.params.base

    def _evaluate(self, n, point):
        return dualhahn_eval(self.params, n, point)

    def abscissa(self, point):
        return dualhahn_x(self.params, point)

    def norm_sq(self, n):
        self.check_degree(n)
        return _dualhahn_norm_sq(self.params, n)

    def ttrr(self, n):
        return dualhahn_ttrr_coeffs(self.params, n)

    def _build_support(self):
        return [
            (s, _dualhahn_rho(self.params, s) * _dualhahn_delta_x(self.params, s))
            for s in range(self.params.N + 1)
        ]

    def endpoints(self):
        return 0, self.params.N

    def flags(self):
        return [DUAL_DELTA_FLAG]


# ---------- q-Hahn ----------
@precise
def qhahn_x(params: QHahnParams, s):
    return mp.power(params.base.q, -s)


@precise
def qhahn_eval(params: QHahnParams, n: int, s: int):
    """(q^-N, alpha q; q)_n / (alpha beta q^(n+1); q)_n 3phi2(q^-n, alpha beta q^(n+1), q^-s; q^-N, alpha q | q, q)."""
    _check_grid(params.N, n, s)
    base = params.base
    q = base.q
    ab = params.alpha_t * params.beta_t
    leading = qpochhammer(ab * mp.power(q, n + 1), base, n)
    if is_negligible(leading):
        raise DenominatorZero(f"(alpha beta q^(n+1);q)_n vanishes at n = {n}")
    numerators = [mp.power(q, -n), ab * mp.power(q, n + 1), mp.power(q, -s)]
    series = cleared_series(numerators, [mp.power(q, -params.N), params.alpha_t * q], base, q, n)
    return series / leading


def _qhahn_rho(params: QHahnParams, s: int):
    base = params.base
    q, kappa = base.q, base.kappa_q
    al, be, N = params.alpha_t, params.beta_t, params.N
    q_minus_N = mp.power(q, -N)
    constant = mp.power(al * q, N) * qpochhammer(be * q, base, N) / qpochhammer(al * be * q * q, base, N)
    shape = qpochhammer([al * q, q_minus_N], base, s) / qpochhammer([q, q_minus_N / be], base, s)
    return mp.power(al * be, -s) / (-kappa) * constant * shape


def _qhahn_norm_sq(params: QHahnParams, n: int):
    base = params.base
    q, al, be, N = base.q, params.alpha_t, params.beta_t, params.N
    ab = al * be
    top = qpochhammer([q, al * q, be * q, mp.power(q, -N), ab * mp.power(q, N + 2)], base, n)
    bottom = qpochhammer([ab * q, ab * mp.power(q, n + 1), ab * mp.power(q, n + 1)], base, n)
    return (
        mp.power(-al * q, n) * mp.power(q, n * (n - 1) // 2 - N * n)
        * (1 - ab * q) / (1 - ab * mp.power(q, 2 * n + 1))
        * top / bottom
    )


def _qhahn_delta_x(params: QHahnParams, s: int):
    return -params.base.kappa_q * mp.power(params.base.q, -s)


@precise
def qhahn_weight_norm(params: QHahnParams, n: int, s: int) -> Tuple:
    """(rho~(s), d~_n^2, Delta x(s - 1/2))."""
    _check_grid(params.N, n, s)
    return _qhahn_rho(params, s), _qhahn_norm_sq(params, n), _qhahn_delta_x(params, s)


def _qhahn_parts(params: QHahnParams, n: int):
    q, al, be, N = params.base.q, params.alpha_t, params.beta_t, params.N
    ab = al * be
    upper = (
        (1 - mp.power(q, n - N))
        * (1 - al * mp.power(q, n + 1))
        * (1 - ab * mp.power(q, n + 1))
        / ((1 - ab * mp.power(q, 2 * n + 1)) * (1 - ab * mp.power(q, 2 * n + 2)))
    )
    if n == 0:
        return upper, mp.zero
    lower = (
        -al * mp.power(q, n - N)
        * (1 - mp.power(q, n))
        * (1 - ab * mp.power(q, n + N + 1))
        * (1 - be * mp.power(q, n))
        / ((1 - ab * mp.power(q, 2 * n)) * (1 - ab * mp.power(q, 2 * n + 1)))
    )
    return upper, lower


@precise
def qhahn_ttrr_coeffs(params: QHahnParams, n: int) -> Tuple:
    if not 0 <= n <= params.N:
        raise DegreeError(f"q-Hahn TTRR needs 0 <= n <= {params.N}, got {n}")
    upper, lower = _qhahn_parts(params, n)
    gamma = _qhahn_parts(params, n - 1)[0] * lower if n else mp.zero
    return 1 - upper - lower, gamma


class QHahnFamily(OrthogonalFamily):
    name = "qhahn"

    def __init__(self, params: QHahnParams):
        super().__init__()
        self.params = params
        self.max_degree = params.N
        self.max_eval_degree = params.N

    @property
    def base(self):
        return self.params.base

    def _evaluate(self, n, point):
        return qhahn_eval(self.params, n, point)

    def abscissa(self, point):
        return qhahn_x(self.params, point)

    def norm_sq(self, n):
        self.check_degree(n)
        return _qhahn_norm_sq(self.params, n)

    def ttrr(self, n):
        return qhahn_ttrr_coeffs(self.params, n)

    def _build_support(self):
        return [
            (s, _qhahn_rho(self.params, s) * _qhahn_delta_x(self.params, s))
            for s in range(self.params.N + 1)
        ]

    def endpoints(self):
        return 0, self.params.N

    def flags(self):
        return [QHAHN_GAMMA_FLAG]


@precise
def hahn_orthogonality_report(params, n_max: int) -> OrthogonalityReport:
    family = DualHahnFamily(params) if isinstance(params, DualHahnParams) else QHahnFamily(params)
    return orthogonality_report(family, n_max)
