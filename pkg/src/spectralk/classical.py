"""Power sums, augmented symmetric functions, Fisher's k-statistics and
Tukey's polykays up to degree 4.

Every function works over whatever scalar field the data live in: pass
``Fraction`` values for exact identities, floats for sampled data.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial, prod

from .combinat import IntegerPartition, _set_partitions, parse_partition
from .errors import CapacityError


@dataclass(frozen=True)
class PowerSums:
    """Sample size ``n`` and power sums ``S[r-1] = sum_j x_j^r`` for r = 1..d."""

    n: int
    S: tuple

    @property
    def degree(self):
        return len(self.S)

    def __getitem__(self, r):
        """S_r, 1-based."""
        if r < 1 or r > len(self.S):
            raise IndexError(f"power sum S_{r} not available (have S_1..S_{len(self.S)})")
        return self.S[r - 1]

    def product(self, lam):
        """prod_j S_{lam_j}."""
        return prod((self[j] for j in lam), start=1)


def as_sample(x):
    """Coerce a sequence to a tuple, turning ints and rational strings into Fractions."""
    out = []
    for v in x:
        if isinstance(v, (int, str)):
            v = Fraction(v)
        out.append(v)
    if not out:
        raise ValueError("empty sample")
    return tuple(out)


def power_sums(x, d):
    """Power sums S_1..S_d of the sample ``x``."""
    x = as_sample(x)
    if d < 1:
        raise ValueError("d must be >= 1")
    S, powers = [], list(x)
    for _ in range(d):
        S.append(sum(powers[1:], start=powers[0]))
        powers = [p * v for p, v in zip(powers, x)]
    return PowerSums(len(x), tuple(S))


def _falling(n, r):
    return prod(range(n - r + 1, n + 1), start=1)


def augmented(lam, x, normalized=False):
    """Augmented symmetric function: the sum over distinct indices
    i_1, ..., i_l of x_{i_1}^{lam_1} ... x_{i_l}^{lam_l}.

    Evaluated from power sums by Moebius inversion over set partitions of
    the index positions.  With ``normalized`` the result is divided by the
    falling factorial (n)_l.
    """
    lam = IntegerPartition(lam)
    x = as_sample(x)
    n, l = len(x), lam.length
    if l > n:
        raise ValueError(f"augmented symmetric function of length {l} needs n >= {l}, got n = {n}")
    p = power_sums(x, lam.weight)
    total = 0
    for tau in _set_partitions(l):
        weight = prod((-1) ** (len(b) - 1) * factorial(len(b) - 1) for b in tau)
        total += weight * prod((p[sum(lam[j - 1] for j in b)] for b in tau), start=1)
    if normalized:
        total = total / Fraction(_falling(n, l)) if isinstance(total, (int, Fraction)) else total / _falling(n, l)
    return total


# k-statistics and polykays as combinations of normalised augmented functions
_K_TABLE = {
    (1,): {(1,): 1},
    (1, 1): {(1, 1): 1},
    (2,): {(2,): 1, (1, 1): -1},
    (1, 1, 1): {(1, 1, 1): 1},
    (2, 1): {(2, 1): 1, (1, 1, 1): -1},
    (3,): {(3,): 1, (2, 1): -3, (1, 1, 1): 2},
    (1, 1, 1, 1): {(1, 1, 1, 1): 1},
    (2, 1, 1): {(2, 1, 1): 1, (1, 1, 1, 1): -1},
    (3, 1): {(3, 1): 1, (2, 1, 1): -3, (1, 1, 1, 1): 2},
    (2, 2): {(2, 2): 1, (2, 1, 1): -2, (1, 1, 1, 1): 1},
    (4,): {(4,): 1, (3, 1): -4, (2, 2): -3, (2, 1, 1): 12, (1, 1, 1, 1): -6},
}


def k_statistic(lam, x):
    """Fisher k-statistic (one part) or Tukey polykay (several parts), degree <= 4.

    ``k_statistic((2,), x)`` is the sample variance with divisor n - 1.
    """
    lam = IntegerPartition(lam)
    if lam.weight > 4:
        raise CapacityError(f"classical k-statistics are tabulated only up to degree 4, got {lam}")
    x = as_sample(x)
    combo = _K_TABLE[tuple(lam)]
    longest = max(len(a) for a in combo)
    if len(x) < longest:
        raise ValueError(f"k_{lam} needs at least {longest} observations, got {len(x)}")
    return sum(c * augmented(a, x, normalized=True) for a, c in combo.items())


def augmented_coefficients(lam, n):
    """Power-sum expansion {nu: c} of the normalised augmented function at
    sample size n: sum_nu c * prod_j S_{nu_j} equals augmented(lam, x, True)."""
    lam = IntegerPartition(lam)
    l = lam.length
    if l > n:
        raise ValueError(f"augmented symmetric function of length {l} needs n >= {l}, got n = {n}")
    out = {}
    for tau in _set_partitions(l):
        weight = prod((-1) ** (len(b) - 1) * factorial(len(b) - 1) for b in tau)
        nu = IntegerPartition(sum(lam[j - 1] for j in b) for b in tau)
        out[nu] = out.get(nu, 0) + Fraction(weight, _falling(n, l))
    return {nu: c for nu, c in out.items() if c}


def k_statistic_coefficients(lam, n):
    """Power-sum expansion {nu: c} of k_statistic(lam, .) at sample size n."""
    lam = IntegerPartition(lam)
    if lam.weight > 4:
        raise CapacityError(f"classical k-statistics are tabulated only up to degree 4, got {lam}")
    out = {}
    for a, w in _K_TABLE[tuple(lam)].items():
        for nu, c in augmented_coefficients(a, n).items():
            out[nu] = out.get(nu, 0) + w * c
    return {nu: c for nu, c in out.items() if c}


def _tukey_rhs(ident, k, m, printed):
    m = Fraction(m) if isinstance(m, int) else m
    k1 = k((1,))
    if ident == "1":
        return k1
    k2 = k((2,))
    if ident == "1^2":
        return k1 * k1 - k2 / m
    k3 = k((3,))
    if ident == "1,2":
        return k1 * k2 - k3 / m
    if ident == "1^3":
        return k1**3 - 3 * k2 * k1 / m + 2 * k3 / m**2
    k4 = k((4,))
    if ident == "1,3":
        return k1 * k3 - k4 / m
    if ident == "2^2":
        # the printed table has -k4/m here
        k4_coeff = 1 / m if printed else (m - 1) / (m * (m + 1))
        return (m - 1) / (m + 1) * k2 * k2 - k4_coeff * k4
    if ident == "1^2,2":
        return k2 * k1 * k1 - 2 * k3 * k1 / m - (m - 1) / (m * (m + 1)) * k2 * k2 + 2 * k4 / (m * (m + 1))
    if ident == "1^4":
        # the printed table has -6m/(m+1) here
        k4_coeff = 6 * m / (m + 1) if printed else 6 / (m**2 * (m + 1))
        return (k1**4 - 6 * k2 * k1 * k1 / m + 8 * k3 * k1 / m**2
                + 3 * (m - 1) / (m**2 * (m + 1)) * k2 * k2 - k4_coeff * k4)
    raise ValueError(f"unknown identity {ident!r}")


TUKEY_IDENTITIES = ("1", "1^2", "1,2", "1^3", "1,3", "2^2", "1^2,2", "1^4")


def tukey_identity_residual(identity_id, x, printed=False):
    """Left minus right side of one of Tukey's polykay identities, with m = n.

    ``identity_id`` names the polykay on the left, e.g. ``"1^2"`` for
    k_(1^2) = k_1 k_1 - k_2 / m.  The k_4 coefficients of the ``"2^2"`` and
    ``"1^4"`` rows are the corrected ones, -(m-1)/(m(m+1)) and
    -6/(m^2(m+1)); ``printed=True`` evaluates the rows as commonly printed
    (-1/m and -6m/(m+1)), which do not vanish.
    """
    if identity_id not in TUKEY_IDENTITIES:
        raise ValueError(f"unknown identity {identity_id!r}; choose from {TUKEY_IDENTITIES}")
    x = as_sample(x)
    lhs = k_statistic(parse_partition(identity_id), x)
    return lhs - _tukey_rhs(identity_id, lambda lam: k_statistic(lam, x), len(x), printed)
