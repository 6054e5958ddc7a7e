"""Moments and free cumulants over noncrossing partitions.

    m_i = sum over pi in NC(i) of prod_{B in pi} c_|B|
"""

from __future__ import annotations

from collections import Counter
from fractions import Fraction
from functools import lru_cache
from math import comb

from .combinat import DEFAULT_DEGREE_CAP, _check_degree, _noncrossing


@lru_cache(maxsize=None)
def noncrossing_type_counts(i):
    """{block-size multiset (sorted tuple): number of noncrossing partitions of [i]}."""
    return dict(Counter(tuple(sorted((len(b) for b in pi), reverse=True)) for pi in _noncrossing(i)))


def _product(sizes, values):
    out = 1
    for s in sizes:
        out = out * values[s - 1]
    return out


def free_cumulants_to_moments(c, cap=DEFAULT_DEGREE_CAP):
    """Moments m_1..m_d from free cumulants c_1..c_d."""
    c = list(c)
    _check_degree(len(c), cap)
    return [sum(cnt * _product(t, c) for t, cnt in noncrossing_type_counts(i).items())
            for i in range(1, len(c) + 1)]


def moments_to_free_cumulants(m, cap=DEFAULT_DEGREE_CAP):
    """Free cumulants c_1..c_d from moments m_1..m_d.

    Triangular: c_i is m_i minus the contribution of every noncrossing
    partition with at least two blocks, all of which involve c_1..c_{i-1}.
    """
    m = list(m)
    _check_degree(len(m), cap)
    c = []
    for i in range(1, len(m) + 1):
        rest = sum(cnt * _product(t, c) for t, cnt in noncrossing_type_counts(i).items() if len(t) > 1)
        c.append(m[i - 1] - rest)
    return c


def semicircle_moments(d):
    """Moments of the standard semicircle law on [-2, 2]: Catalan numbers at even orders."""
    return [Fraction(0) if k % 2 else Fraction(comb(k, k // 2), k // 2 + 1) for k in range(1, d + 1)]


def uniform_moments(d):
    """Moments of the uniform law on [-1, 1]."""
    return [Fraction(0) if k % 2 else Fraction(1, k + 1) for k in range(1, d + 1)]
