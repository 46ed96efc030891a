from typing import Sequence

from mpmath import mp

from .config import current_precision


def divided_difference(xs: Sequence, ys: Sequence):
    """
    Highest-order divided difference f[x_0, ..., x_k] of the data (xs, ys).

    For a monic polynomial of degree k sampled at k+1 distinct abscissae this
    is 1, which is how monicity is checked without coefficient extraction.
    """
    if len(xs) != len(ys) or not xs:
        raise ValueError("need the same, nonzero number of abscissae and values")
    table = list(ys)
    for order in range(1, len(xs)):
        table = [
            (table[i + 1] - table[i]) / (xs[i + order] - xs[i])
            for i in range(len(table) - 1)
        ]
    return table[0]


def relative_error(value, target):
    """|value - target| / (1 + |target|)."""
    return abs(value - target) / (1 + abs(target))


def scaled_residual(value, target, scale):
    """|value - target| / |scale|, falling back to the absolute gap when scale is 0."""
    gap = abs(value - target)
    return gap / abs(scale) if scale != 0 else gap


def format_real(value, digits: int = None) -> str:
    """value at the requested digits of the active context, guard digits dropped."""
    return mp.nstr(value, digits or current_precision().digits, strip_zeros=False)


def is_negligible(value, scale=1) -> bool:
    """True when value is zero up to a few ulps of the working precision."""
    return abs(value) <= mp.eps * 1024 * (1 + abs(scale))
