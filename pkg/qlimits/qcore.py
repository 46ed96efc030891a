"""
q-arithmetic primitives shared by every family: symmetric q-numbers,
q-Pochhammer symbols, q-Gamma functions, terminating basic hypergeometric
series and the q-Jackson integral.
"""

import logging
from typing import Callable, List, Sequence, Tuple, Union

from mpmath import mp

from .config import current_precision, precise, settings
from .errors import DenominatorZero, NonConvergence, ParameterError, PoleError
from .schemas import QBase
from .utils import is_negligible

logger = logging.getLogger(__name__)


@precise
def qnum(s, base: QBase):
    """Symmetric q-number [s]_q = (q^(s/2) - q^(-s/2)) / (q^(1/2) - q^(-1/2))."""
    # same expression as kappa_q, so [1]_q is exactly 1
    up = mp.power(mp.sqrt(base.q), s)
    return (up - 1 / up) / base.kappa_q


@precise
def qpochhammer(a: Union[object, Sequence], base: QBase, k: int):
    """
    (a; q)_k, or the product (a_1, ..., a_m; q)_k when a is a sequence.
    """
    if k < 0:
        raise ParameterError(f"Pochhammer length must be >= 0, got {k}")
    if isinstance(a, (list, tuple)):
        return mp.fprod(mp.qp(x, base.q, k) for x in a)
    return mp.qp(a, base.q, k)


@precise
def qpochhammer_inf(a, base: QBase):
    """(a; q)_oo, truncated once the factors are 1 to working precision."""
    try:
        return mp.qp(a, base.q, maxterms=settings.max_terms)
    except mp.NoConvergence as exc:
        raise NonConvergence(f"(a;q)_oo did not converge for a = {mp.nstr(a, 10)}") from exc


def _check_pole(s):
    tol = current_precision().rel_tol
    nearest = mp.nint(s)
    if nearest <= 0 and abs(s - nearest) <= tol:
        raise PoleError(f"q-Gamma pole at s = {mp.nstr(s, 10)}")


@precise
def qgamma(s, base: QBase):
    """Gamma_q(s) = (1-q)^(1-s) (q;q)_oo / (q^s;q)_oo."""
    s = mp.mpf(s)
    _check_pole(s)
    try:
        return mp.qgamma(s, base.q)
    except mp.NoConvergence as exc:
        raise NonConvergence(f"Gamma_q did not converge at s = {mp.nstr(s, 10)}") from exc


@precise
def qgamma_tilde(s, base: QBase):
    """q^(-(s-1)(s-2)/4) Gamma_q(s)."""
    s = mp.mpf(s)
    return mp.power(base.q, -(s - 1) * (s - 2) / 4) * qgamma(s, base)


@precise
def basic_hypergeometric_terminating(numerators: List, denominators: List, base: QBase, z, n: int):
    """
    Terminating (r+1)phi_r series summed for k = 0..n.

    Summation stops as soon as a numerator Pochhammer vanishes, so
    denominators are only inspected where a nonzero term needs them.
    """
    if n < 0:
        raise ParameterError(f"series length must be >= 0, got {n}")
    q = base.q
    term = mp.one
    terms = [term]
    for k in range(n):
        num = [1 - a * mp.power(q, k) for a in numerators]
        if any(is_negligible(f, a * mp.power(q, k)) for f, a in zip(num, numerators)):
            break
        den = [1 - b * mp.power(q, k) for b in denominators]
        for f, b in zip(den, denominators):
            if is_negligible(f, b * mp.power(q, k)):
                raise DenominatorZero(
                    f"denominator Pochhammer ({mp.nstr(b, 10)};q)_{k + 1} vanishes"
                )
        term = term * mp.fprod(num) / mp.fprod(den) * z / (1 - mp.power(q, k + 1))
        terms.append(term)
    return mp.fsum(terms)


@precise
def cleared_series(numerators: List, denominators: List, base: QBase, z, n: int):
    """
    prod_j (b_j;q)_n times the terminating series with denominators b_j.

    Each denominator Pochhammer is cleared against the prefactor,
    (b;q)_n / (b;q)_k = (b q^k; q)_(n-k), so the result is a polynomial in
    the parameters and stays finite where a denominator would vanish.
    """
    q = base.q
    terms = []
    numerator = mp.one
    q_factorial = mp.one
    for k in range(n + 1):
        if k:
            numerator *= mp.fprod(1 - a * mp.power(q, k - 1) for a in numerators)
            q_factorial *= 1 - mp.power(q, k)
        if numerator == 0:
            break
        cleared = mp.fprod(mp.qp(b * mp.power(q, k), q, n - k) for b in denominators)
        terms.append(cleared * numerator * mp.power(z, k) / q_factorial)
    return mp.fsum(terms)


def _jackson_branch(f: Callable, t, base: QBase):
    """(1-q) t sum_{s>=0} f(t q^s) q^s."""
    if t == 0:
        return mp.zero
    tol = current_precision().trunc_tol
    q = base.q
    partial = mp.zero
    quiet = 0
    point, step = mp.mpf(t), mp.one
    for count in range(settings.max_terms):
        term = f(point) * step
        partial += term
        if abs(term) <= tol * (abs(partial) + tol):
            quiet += 1
            if quiet == 2:
                logger.debug(f"Jackson branch at t={mp.nstr(t, 8)} truncated after {count + 1} terms")
                return (1 - q) * t * partial
        else:
            quiet = 0
        point *= q
        step *= q
    raise NonConvergence(f"q-Jackson sum at t={mp.nstr(t, 8)} exceeded {settings.max_terms} terms")


@precise
def jackson_qintegral(f: Callable, lower, upper, base: QBase):
    """
    q-Jackson integral of f from lower to upper, as I(upper) - I(lower)
    with I(t) = (1-q) t sum_{s>=0} f(t q^s) q^s.
    """
    lower, upper = mp.mpf(lower), mp.mpf(upper)
    if not lower < upper:
        raise ParameterError("q-Jackson integral needs lower < upper")
    return _jackson_branch(f, upper, base) - _jackson_branch(f, lower, base)


@precise
def jackson_grid(t, base: QBase, count: int) -> List[Tuple]:
    """First count nodes t q^s of a Jackson branch with their weights (1-q)|t| q^s."""
    q = base.q
    return [
        (t * mp.power(q, s), (1 - q) * abs(t) * mp.power(q, s))
        for s in range(count)
    ]
