"""Exact linear solves over the rationals."""

from __future__ import annotations

from fractions import Fraction
from math import lcm

from .errors import NotInvertibleError


def _integer_rows(a, b):
    rows = []
    for row, rhs in zip(a, b):
        row = [Fraction(v) for v in row] + [Fraction(rhs)]
        scale = lcm(*(v.denominator for v in row))
        rows.append([int(v * scale) for v in row])
    return rows


def solve(a, b):
    """Solve ``a @ x = b`` exactly.

    Rows are scaled to integers, then reduced by Bareiss fraction-free
    elimination, so every intermediate stays an integer; only the back
    substitution produces fractions.

    Raises NotInvertibleError if ``a`` is singular.
    """
    n = len(a)
    if any(len(row) != n for row in a) or len(b) != n:
        raise ValueError("solve needs a square system")
    m = _integer_rows(a, b)
    prev = 1
    for k in range(n):
        pivot = next((r for r in range(k, n) if m[r][k] != 0), None)
        if pivot is None:
            raise NotInvertibleError(f"singular system (rank < {n})")
        if pivot != k:
            m[k], m[pivot] = m[pivot], m[k]
        pk = m[k][k]
        for r in range(k + 1, n):
            mr = m[r]
            f = mr[k]
            for c in range(k + 1, n + 1):
                mr[c] = (pk * mr[c] - f * m[k][c]) // prev
            mr[k] = 0
        prev = pk
    x = [Fraction(0)] * n
    for k in range(n - 1, -1, -1):
        acc = Fraction(m[k][n]) - sum(m[k][c] * x[c] for c in range(k + 1, n))
        x[k] = acc / m[k][k]
    return x
