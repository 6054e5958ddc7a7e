"""Integer partitions, set partitions, noncrossing partitions and the
Moebius function of the set-partition lattice.

All coefficients are exact: integers or :class:`fractions.Fraction`.
"""

from __future__ import annotations

from collections import Counter
from fractions import Fraction
from functools import lru_cache
from math import factorial, prod

from .errors import CapacityError

DEFAULT_DEGREE_CAP = 8


def _check_degree(i, cap):
    if not isinstance(i, int) or i < 1:
        raise ValueError(f"degree must be a positive integer, got {i!r}")
    if i > cap:
        raise CapacityError(f"degree {i} exceeds cap {cap}")


class IntegerPartition(tuple):
    """A partition of an integer, stored as a weakly decreasing tuple of parts.

    >>> lam = IntegerPartition([1, 2, 1])
    >>> lam, lam.weight, lam.length, lam.multiplicities
    ((2, 1, 1), 4, 3, {1: 2, 2: 1})
    """

    def __new__(cls, parts):
        parts = tuple(sorted((int(p) for p in parts), reverse=True))
        if not parts or parts[-1] < 1:
            raise ValueError(f"partition parts must be positive integers, got {parts}")
        return super().__new__(cls, parts)

    @property
    def weight(self):
        return sum(self)

    @property
    def length(self):
        return len(self)

    @property
    def multiplicities(self):
        """Map j -> r_j, the number of parts equal to j."""
        return dict(sorted(Counter(self).items()))

    def label(self):
        """Compact exponent notation, e.g. ``1^2,2``."""
        mult = self.multiplicities
        return ",".join(f"{j}^{r}" if r > 1 else f"{j}" for j, r in mult.items())

    def __repr__(self):
        return f"IntegerPartition({list(self)})"

    def __str__(self):
        return f"({self.label()})"


def parse_partition(text):
    """Parse ``"1^2,2"``, ``"2,1,1"`` or ``"(1^2,2)"`` into an IntegerPartition."""
    text = text.strip().strip("()[]")
    parts = []
    for tok in text.replace(" ", "").split(","):
        if not tok:
            continue
        if "^" in tok:
            base, exp = tok.split("^")
            parts.extend([int(base)] * int(exp))
        else:
            parts.append(int(tok))
    return IntegerPartition(parts)


@lru_cache(maxsize=None)
def _partitions(i, largest):
    if i == 0:
        return ((),)
    out = []
    for first in range(min(i, largest), 0, -1):
        for rest in _partitions(i - first, first):
            out.append((first,) + rest)
    return tuple(out)


def enumerate_partitions(i, cap=DEFAULT_DEGREE_CAP):
    """All partitions of ``i`` in reverse lexicographic order: (i), (i-1,1), ..., (1^i)."""
    _check_degree(i, cap)
    return [IntegerPartition(p) for p in _partitions(i, i)]


def coeff_d(lam):
    """Number of set partitions of {1..i} with block sizes ``lam``.

    ``i! / ((1!)^r1 r1! (2!)^r2 r2! ...)``.
    """
    lam = IntegerPartition(lam)
    den = prod(factorial(j) ** r * factorial(r) for j, r in lam.multiplicities.items())
    return Fraction(factorial(lam.weight), den)


def coeff_s(lam):
    """Number of permutations of cycle class ``lam``: ``i! / (1^r1 r1! 2^r2 r2! ...)``."""
    lam = IntegerPartition(lam)
    den = prod(j**r * factorial(r) for j, r in lam.multiplicities.items())
    return factorial(lam.weight) // den


def kstat_prefactor(lam):
    """``(1!)^r2 (2!)^r3 ...``, i.e. the product of (j-1)! over the parts j."""
    return prod(factorial(j - 1) for j in IntegerPartition(lam))


class SetPartition(tuple):
    """A partition of {1..i} in canonical form.

    Blocks are sorted tuples, ordered by their minimum element.
    """

    def __new__(cls, blocks):
        blocks = tuple(sorted((tuple(sorted(b)) for b in blocks), key=lambda b: b[0] if b else 0))
        elements = [e for b in blocks for e in b]
        if any(not b for b in blocks):
            raise ValueError("blocks must be nonempty")
        if sorted(elements) != list(range(1, len(elements) + 1)):
            raise ValueError(f"blocks must partition {{1..i}}, got {blocks}")
        return super().__new__(cls, blocks)

    @property
    def size(self):
        """Size i of the ground set."""
        return sum(len(b) for b in self)

    @property
    def block_class(self):
        """Integer partition of block sizes."""
        return IntegerPartition(len(b) for b in self)

    def block_index(self):
        """Map element -> index of its block."""
        return {e: k for k, b in enumerate(self) for e in b}

    def __repr__(self):
        inner = ",".join("{" + ",".join(map(str, b)) + "}" for b in self)
        return "{" + inner + "}"


@lru_cache(maxsize=None)
def _set_partitions(i):
    # restricted growth strings in lexicographic order
    out = []
    rgs = [0] * i

    def rec(pos, top):
        if pos == i:
            blocks = [[] for _ in range(top + 1)]
            for elem, b in enumerate(rgs, start=1):
                blocks[b].append(elem)
            out.append(SetPartition(blocks))
            return
        for b in range(top + 2):
            rgs[pos] = b
            rec(pos + 1, max(top, b))

    rgs[0] = 0
    rec(1, 0)
    return tuple(out)


def enumerate_set_partitions(i, cap=DEFAULT_DEGREE_CAP):
    """All partitions of {1..i}, in restricted-growth-string order.

    The count is the Bell number B_i.
    """
    _check_degree(i, cap)
    return list(_set_partitions(i))


def canonical_set_partition(lam):
    """The set partition of class ``lam`` filling blocks with consecutive
    integers, largest blocks first: (2,1) -> {1,2},{3}."""
    lam = IntegerPartition(lam)
    blocks, start = [], 1
    for part in lam:
        blocks.append(range(start, start + part))
        start += part
    return SetPartition(blocks)


def _same_ground(pi, tau):
    if pi.size != tau.size:
        raise ValueError(f"set partitions of different ground sets: {pi.size} vs {tau.size}")


def refines(pi, tau):
    """True iff every block of ``pi`` lies inside a block of ``tau`` (pi <= tau)."""
    _same_ground(pi, tau)
    where = tau.block_index()
    return all(len({where[e] for e in b}) == 1 for b in pi)


def lattice_type(pi, tau):
    """The integer partition lambda(pi, tau): for each block of ``tau``, the
    number of blocks of ``pi`` it contains."""
    where = tau.block_index()
    counts = Counter(where[b[0]] for b in pi)
    return IntegerPartition(counts.values())


def moebius(pi, tau):
    """Moebius function of the set-partition lattice,
    ``(-1)^(s-t) (2!)^r3 (3!)^r4 ...`` with s = |pi|, t = |tau|."""
    if not refines(pi, tau):
        raise ValueError(f"{pi!r} does not refine {tau!r}")
    s, t = len(pi), len(tau)
    lam = lattice_type(pi, tau)
    return (-1) ** (s - t) * prod(factorial(j - 1) for j in lam)


def is_noncrossing(pi):
    """No h < l < s < k with h, s in one block and l, k in another."""
    blocks = list(pi)
    for a in range(len(blocks)):
        for b in range(a + 1, len(blocks)):
            if _crosses(blocks[a], blocks[b]):
                return False
    return True


def _crosses(b1, b2):
    # b1, b2 sorted; they cross iff some element of b2 lies strictly between two
    # consecutive elements of b1 while another element of b2 lies outside that gap
    for lo, hi in zip(b1, b1[1:]):
        inside = [e for e in b2 if lo < e < hi]
        if inside and len(inside) < len(b2):
            return True
    return False


@lru_cache(maxsize=None)
def _noncrossing(i):
    return tuple(p for p in _set_partitions(i) if is_noncrossing(p))


def enumerate_noncrossing(i, cap=DEFAULT_DEGREE_CAP):
    """All noncrossing partitions of {1..i}; the count is the Catalan number C_i."""
    _check_degree(i, cap)
    return list(_noncrossing(i))
