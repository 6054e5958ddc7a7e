"""The centre of the group algebra of S_i: class functions under convolution.

A class function is stored by its value on each cycle class (an integer
partition of i).  Convolution

    (f . g)(sigma) = sum_{rho omega = sigma} f(rho) g(omega)

is evaluated through a table of class structure constants, counted once
per degree by brute force over S_i.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import permutations

import numpy as np

from . import exact
from .combinat import DEFAULT_DEGREE_CAP, IntegerPartition, _check_degree, _partitions


@lru_cache(maxsize=None)
def classes_of(i):
    """Cycle classes of S_i in reverse lexicographic order (uncapped)."""
    return tuple(IntegerPartition(p) for p in _partitions(i, i))


def cycle_class(perm):
    """Cycle class of a permutation given in one-line form on {0..i-1}."""
    seen = [False] * len(perm)
    lengths = []
    for start in range(len(perm)):
        if seen[start]:
            continue
        n, j = 0, start
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            n += 1
        lengths.append(n)
    return IntegerPartition(lengths)


def class_representative(lam):
    """Permutation of class ``lam`` whose cycles are filled with consecutive
    integers in increasing order, e.g. (2,1) -> (0 1)(2)."""
    perm, start = [], 0
    for part in IntegerPartition(lam):
        perm.extend(range(start + 1, start + part))
        perm.append(start)
        start += part
    return tuple(perm)


@dataclass(frozen=True)
class ClassConvolutionTable:
    """``counts[a, b, c]`` is the number of pairs (rho, omega) with rho of class
    ``classes[a]``, omega of class ``classes[b]`` and rho omega equal to the
    fixed representative of ``classes[c]``."""

    degree: int
    classes: tuple
    counts: np.ndarray

    def index(self, lam):
        return self.classes.index(IntegerPartition(lam))


_tables = {}
_tables_lock = threading.Lock()


def _count_structure_constants(i):
    classes = classes_of(i)
    where = {lam: k for k, lam in enumerate(classes)}
    perms = np.array(list(permutations(range(i))), dtype=np.int64)
    cls = np.array([where[cycle_class(p)] for p in perms.tolist()], dtype=np.int64)
    inverse = np.empty_like(perms)
    np.put_along_axis(inverse, perms, np.arange(i)[None, :].repeat(len(perms), 0), axis=1)
    # itertools.permutations is lexicographic, so base-i codes are sorted
    radix = i ** np.arange(i - 1, -1, -1, dtype=np.int64)
    codes = perms @ radix
    p = len(classes)
    counts = np.zeros((p, p, p), dtype=np.int64)
    for c, lam in enumerate(classes):
        sigma = np.array(class_representative(lam), dtype=np.int64)
        # omega = rho^{-1} sigma, i.e. omega(x) = rho^{-1}(sigma(x))
        omega = inverse[:, sigma]
        idx = np.searchsorted(codes, omega @ radix)
        np.add.at(counts[:, :, c], (cls, cls[idx]), 1)
    return ClassConvolutionTable(i, classes, counts)


def build_convolution_table(i, cap=DEFAULT_DEGREE_CAP):
    """Class structure constants of S_i, cached per degree.

    Cost is O(i! * p(i)) permutation compositions (vectorised); i = 8 takes
    about a second.
    """
    _check_degree(i, cap)
    table = _tables.get(i)
    if table is None:
        with _tables_lock:
            table = _tables.get(i)
            if table is None:
                table = _tables[i] = _count_structure_constants(i)
    return table


class ClassFunction:
    """A function on S_i constant on cycle classes.

    Values are normally exact ``Fraction``; floats are accepted so the same
    code path can evaluate statistics on sampled eigenvalues.
    """

    __slots__ = ("degree", "values")

    def __init__(self, degree, values):
        classes = classes_of(degree)
        vals = {IntegerPartition(k): v for k, v in dict(values).items()}
        if set(vals) != set(classes):
            raise ValueError(f"class function of degree {degree} needs one value per partition of {degree}")
        self.degree = degree
        self.values = {lam: vals[lam] for lam in classes}

    @classmethod
    def from_vector(cls, degree, vector):
        classes = classes_of(degree)
        return cls(degree, zip(classes, vector))

    def vector(self):
        return list(self.values.values())

    def __getitem__(self, lam):
        return self.values[IntegerPartition(lam)]

    def _check(self, other):
        if not isinstance(other, ClassFunction):
            return NotImplemented
        if other.degree != self.degree:
            raise ValueError(f"degree mismatch: {self.degree} vs {other.degree}")
        return None

    def __add__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return ClassFunction(self.degree, {k: v + other.values[k] for k, v in self.values.items()})

    def __sub__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return ClassFunction(self.degree, {k: v - other.values[k] for k, v in self.values.items()})

    def __mul__(self, scalar):
        return ClassFunction(self.degree, {k: scalar * v for k, v in self.values.items()})

    __rmul__ = __mul__

    def __matmul__(self, other):
        return convolve(self, other)

    def __eq__(self, other):
        if not isinstance(other, ClassFunction):
            return NotImplemented
        return self.degree == other.degree and self.values == other.values

    def __repr__(self):
        body = ", ".join(f"{lam}: {v}" for lam, v in self.values.items())
        return f"ClassFunction({self.degree}, {{{body}}})"


def convolve(f, g):
    """Group-algebra product of two class functions of the same degree."""
    if f.degree != g.degree:
        raise ValueError(f"degree mismatch: {f.degree} vs {g.degree}")
    table = build_convolution_table(f.degree, cap=max(f.degree, DEFAULT_DEGREE_CAP))
    fv, gv = f.vector(), g.vector()
    p = len(fv)
    counts = table.counts.tolist()
    out = []
    for c in range(p):
        acc = 0
        for a in range(p):
            if not fv[a]:
                continue
            row = counts[a]
            inner = sum(row[b][c] * gv[b] for b in range(p) if row[b][c])
            acc += fv[a] * inner
        out.append(acc)
    return ClassFunction.from_vector(f.degree, out)


def delta(i):
    """Unit of the algebra: 1 on the identity class (1^i), 0 elsewhere."""
    return ClassFunction(i, {lam: Fraction(int(lam.length == i)) for lam in classes_of(i)})


def mu_identity(m, i):
    """mu(I_m): sigma -> m^(number of cycles of sigma)."""
    return ClassFunction(i, {lam: Fraction(m) ** lam.length for lam in classes_of(i)})


def left_multiplication_matrix(f):
    """Matrix M with (f . g) = M @ g in the class basis."""
    table = build_convolution_table(f.degree, cap=max(f.degree, DEFAULT_DEGREE_CAP))
    fv = f.vector()
    p = len(fv)
    counts = table.counts.tolist()
    return [[sum(counts[a][b][c] * fv[a] for a in range(p)) for b in range(p)] for c in range(p)]


def invert(f):
    """Convolution inverse of ``f`` by an exact linear solve.

    Raises NotInvertibleError when no inverse exists (for instance
    mu_identity(m, i) with i > m).
    """
    rhs = delta(f.degree).vector()
    sol = exact.solve(left_multiplication_matrix(f), rhs)
    return ClassFunction.from_vector(f.degree, sol)
