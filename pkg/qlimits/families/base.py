"""
Common interface for the monic orthogonal families.

Every family exposes its polynomials by evaluation only, together with the
abscissa of each support point, its discrete orthogonality masses, closed-form
norms and TTRR coefficients. Gram matrices, TTRR residuals and the kernel and
mass-point machinery are written once against this interface.
"""

import functools
from abc import ABC, abstractmethod
from typing import Any, List, Optional, Tuple

from mpmath import mp

from ..config import precise
from ..errors import DegreeError
from ..schemas import OrthogonalityReport, TtrrReport
from ..utils import scaled_residual


class OrthogonalFamily(ABC):
    name = "family"
    # highest degree with a nonzero norm; None for infinite families
    max_degree: Optional[int] = None
    # highest degree the evaluation path accepts
    max_eval_degree: Optional[int] = None
    # caveats that only apply once mass points are added
    krall_notes: Tuple[str, ...] = ()

    # evaluations kept per family instance, across all precisions
    value_cache_size = 4096

    def __init__(self):
        self._values = functools.lru_cache(maxsize=self.value_cache_size)(self._evaluate_at)
        self._support = (None, None)

    @property
    @abstractmethod
    def base(self):
        """QBase shared by all quantities of the family."""

    @abstractmethod
    def _evaluate(self, n: int, point):
        ...

    @abstractmethod
    def abscissa(self, point):
        ...

    @abstractmethod
    def norm_sq(self, n: int):
        ...

    @abstractmethod
    def ttrr(self, n: int) -> Tuple[Any, Any]:
        """(beta_n, gamma_n) of x p_n = p_{n+1} + beta_n p_n + gamma_n p_{n-1}."""

    @abstractmethod
    def _build_support(self) -> List[Tuple[Any, Any]]:
        ...

    @abstractmethod
    def endpoints(self) -> Tuple[Any, Any]:
        """The two support points that carry Krall masses."""

    def flags(self) -> List[str]:
        return []

    def check_degree(self, n: int, limit: Optional[int] = None):
        limit = self.max_degree if limit is None else limit
        if n < 0 or (limit is not None and n > limit):
            raise DegreeError(f"{self.name}: degree {n} outside 0..{limit}")

    def _evaluate_at(self, prec: int, n: int, point):
        self.check_degree(n, self.max_eval_degree)
        return self._evaluate(n, point)

    def evaluate(self, n: int, point):
        return self._values(mp.prec, n, point)

    def support(self) -> List[Tuple[Any, Any]]:
        """(point, mass) pairs; sum mass * p_n * p_m = delta_nm * norm_sq(n)."""
        prec, cached = self._support
        if prec != mp.prec:
            cached = self._build_support()
            self._support = (mp.prec, cached)
        return cached


@precise
def recurrence_values(family: OrthogonalFamily, n_max: int, x) -> List:
    """p_0(x), ..., p_n_max(x) by forward recurrence from p_{-1} = 0, p_0 = 1."""
    values = [mp.one]
    previous = mp.zero
    for n in range(n_max):
        beta, gamma = family.ttrr(n)
        current = values[-1]
        values.append((x - beta) * current - gamma * previous)
        previous = current
    return values


@precise
def gram_matrix(family: OrthogonalFamily, n_max: int, support=None) -> List[List]:
    """G[n][m] = sum over the support of mass * p_n * p_m, ascending point order."""
    support = family.support() if support is None else support
    columns = [[family.evaluate(n, point) for point, _ in support] for n in range(n_max + 1)]
    masses = [mass for _, mass in support]
    gram = [[mp.zero] * (n_max + 1) for _ in range(n_max + 1)]
    for n in range(n_max + 1):
        for m in range(n, n_max + 1):
            value = mp.fsum(w * u * v for w, u, v in zip(masses, columns[n], columns[m]))
            gram[n][m] = gram[m][n] = value
    return gram


@precise
def orthogonality_report(family: OrthogonalFamily, n_max: int) -> OrthogonalityReport:
    """
    Gram matrix against diag(norm_sq). Residuals are scaled by
    sqrt(|d_n^2 d_m^2|), so they read as relative errors on every entry.
    """
    family.check_degree(n_max)
    gram = gram_matrix(family, n_max)
    norms = [family.norm_sq(n) for n in range(n_max + 1)]
    residuals = []
    for n in range(n_max + 1):
        row = []
        for m in range(n_max + 1):
            target = norms[n] if n == m else mp.zero
            scale = mp.sqrt(abs(norms[n] * norms[m]))
            row.append(scaled_residual(gram[n][m], target, scale))
        residuals.append(row)
    off = [residuals[n][m] for n in range(n_max + 1) for m in range(n_max + 1) if n != m]
    return OrthogonalityReport(
        family=family.name,
        n_max=n_max,
        gram=gram,
        norms=norms,
        residuals=residuals,
        max_off_diagonal=max(off) if off else mp.zero,
        max_diagonal=max(residuals[n][n] for n in range(n_max + 1)),
        flags=family.flags(),
    )


@precise
def ttrr_report(family: OrthogonalFamily, n_max: int) -> TtrrReport:
    """Max over the support of |x p_n - p_{n+1} - beta_n p_n - gamma_n p_{n-1}| / max(1, |p_{n+1}|)."""
    family.check_degree(n_max + 1, family.max_eval_degree)
    betas, gammas, residuals = [], [], []
    for n in range(n_max + 1):
        beta, gamma = family.ttrr(n)
        betas.append(beta)
        gammas.append(gamma)
        worst = mp.zero
        for point, _ in family.support():
            x = family.abscissa(point)
            upper = family.evaluate(n + 1, point)
            lower = family.evaluate(n - 1, point) if n else mp.zero
            gap = x * family.evaluate(n, point) - upper - beta * family.evaluate(n, point) - gamma * lower
            worst = max(worst, abs(gap) / max(mp.one, abs(upper)))
        residuals.append(worst)
    return TtrrReport(
        family=family.name,
        n_max=n_max,
        beta=betas,
        gamma=gammas,
        residuals=residuals,
        max_residual=max(residuals),
        flags=family.flags(),
    )


@precise
def moment_quotient(family: OrthogonalFamily):
    """sum x * mass / sum mass, which is beta_0 for any monic family."""
    support = family.support()
    total = mp.fsum(mass for _, mass in support)
    first = mp.fsum(family.abscissa(point) * mass for point, mass in support)
    return first / total
