"""Spectral k-statistics and spectral polykays.

For a spectrum y of size m and degree i <= m the class function

    kappa~(y) = mu(I_m)^(-1) . mu(y)

on S_i is computed in the group algebra, where mu(y) sends a permutation of
cycle class lambda to prod_j S_{lambda_j}(y) and mu(I_m) sends it to
m^(number of cycles).  The spectral k-statistic of class lambda is

    K_lambda(y) = prod_j (lambda_j - 1)! * kappa~(y)(lambda)

and is inherited on the average under Haar-unitary spectral sampling.
The generalized polykays l_lambda are Moebius transforms of kappa~ over the
set-partition lattice.

Functions accept exact (``Fraction``) or float spectra; exact input gives
exact output.
"""

from __future__ import annotations

import random
from fractions import Fraction
from functools import lru_cache
from itertools import product as cartesian
from math import factorial

from . import exact
from .classical import PowerSums, as_sample, k_statistic, k_statistic_coefficients, power_sums
from .combinat import (
    IntegerPartition,
    _check_degree,
    _set_partitions,
    canonical_set_partition,
    coeff_d,
    kstat_prefactor,
    moebius,
    refines,
)
from .errors import CapacityError, DegreeExceedsSampleError, NotInvertibleError
from .group_algebra import (
    ClassFunction,
    classes_of,
    convolve,
    invert,
    left_multiplication_matrix,
    mu_identity,
)

DEFAULT_SPECTRAL_CAP = 6
KINDS = ("spectral_k", "spectral_l")


def _degree_ok(i, m, cap):
    _check_degree(i, cap)
    if i > m:
        raise DegreeExceedsSampleError(i, m)


@lru_cache(maxsize=None)
def mu_identity_inverse(m, i):
    """mu(I_m)^(-1) in the class algebra of S_i; needs i <= m."""
    try:
        return invert(mu_identity(m, i))
    except NotInvertibleError as exc:
        raise DegreeExceedsSampleError(i, m) from exc


def mu_of_spectrum(p, i):
    """Class function lambda -> prod_j S_{lambda_j} (needs S_1..S_i)."""
    if p.degree < i:
        raise ValueError(f"need power sums up to S_{i}, have S_1..S_{p.degree}")
    return ClassFunction(i, {lam: p.product(lam) for lam in classes_of(i)})


@lru_cache(maxsize=None)
def kappa_coefficients(m, i):
    """Power-sum expansion of kappa~ at size m.

    Returns {lambda: {nu: c}} with kappa~(lambda) = sum_nu c * prod_j S_{nu_j}.
    """
    matrix = left_multiplication_matrix(mu_identity_inverse(m, i))
    classes = classes_of(i)
    return {lam: dict(zip(classes, row)) for lam, row in zip(classes, matrix)}


def kappa_tilde(x, i, cap=DEFAULT_SPECTRAL_CAP):
    """The class function kappa~(x) of degree i, with m = len(x)."""
    x = as_sample(x)
    _degree_ok(i, len(x), cap)
    return convolve(mu_identity_inverse(len(x), i), mu_of_spectrum(power_sums(x, i), i))


def spectral_kstat(lam, x, cap=DEFAULT_SPECTRAL_CAP):
    """Spectral k-statistic (polykay) K_lambda(x).

    >>> spectral_kstat((2,), [1, 2, 3])
    Fraction(1, 4)
    """
    lam = IntegerPartition(lam)
    return kstat_prefactor(lam) * kappa_tilde(x, lam.weight, cap)[lam]


@lru_cache(maxsize=None)
def l_coefficients(lam):
    """Coefficients of l_lambda on kappa~ classes, summed over the interval
    above the canonical set partition of class ``lam``:
    {class nu: sum of moebius(pi, tau) over tau >= pi of class nu}."""
    lam = IntegerPartition(lam)
    pi = canonical_set_partition(lam)
    out = {}
    for tau in _set_partitions(lam.weight):
        if refines(pi, tau):
            nu = tau.block_class
            out[nu] = out.get(nu, 0) + moebius(pi, tau)
    return {nu: c for nu, c in out.items() if c}


def generalized_polykay_l(lam, x, cap=DEFAULT_SPECTRAL_CAP):
    """Transformed generalized spectral polykay l_lambda(x)."""
    lam = IntegerPartition(lam)
    kt = kappa_tilde(x, lam.weight, cap)
    return sum(c * kt[nu] for nu, c in l_coefficients(lam).items())


def normalized_spectral(lam, x, kind="kstat", cap=DEFAULT_SPECTRAL_CAP):
    """m^(i - l(lambda)) times kappa~_lambda (``kind="kstat"``) or l_lambda
    (``kind="polykay"``)."""
    lam = IntegerPartition(lam)
    x = as_sample(x)
    if kind == "kstat":
        raw = kappa_tilde(x, lam.weight, cap)[lam]
    elif kind == "polykay":
        raw = generalized_polykay_l(lam, x, cap)
    else:
        raise ValueError(f"kind must be 'kstat' or 'polykay', got {kind!r}")
    return len(x) ** (lam.weight - lam.length) * raw


def statistic_coefficients(kind, lam, m):
    """Power-sum expansion {nu: c} of a statistic at sample size m.

    ``kind`` is ``"spectral_k"`` (K_lambda) or ``"spectral_l"`` (l_lambda).
    """
    lam = IntegerPartition(lam)
    i = lam.weight
    if i > m:
        raise DegreeExceedsSampleError(i, m)
    kc = kappa_coefficients(m, i)
    if kind == "spectral_k":
        pre = kstat_prefactor(lam)
        return {nu: pre * c for nu, c in kc[lam].items() if c}
    if kind == "spectral_l":
        out = {}
        for cls, w in l_coefficients(lam).items():
            for nu, c in kc[cls].items():
                out[nu] = out.get(nu, 0) + w * c
        return {nu: c for nu, c in out.items() if c}
    raise ValueError(f"unknown statistic kind {kind!r}")


def expected_power_products(x, m, i, cap=DEFAULT_SPECTRAL_CAP):
    """Exact conditional expectation E[prod_j S_{lambda_j}(y) | x] over spectral
    samples y of size m, as a class function of lambda.

    Equals mu(I_m) . kappa~(x).
    """
    return convolve(mu_identity(m, i), kappa_tilde(x, i, cap))


PRINTED_TYPOS = {
    ("spectral_k", (4,)): "denominator printed as n^2(n^2-1)(n^2-4)(n^2-9); the numerator needs n(n^2-1)(n^2-4)(n^2-9)",
    ("spectral_k", (2, 1, 1)): "S_2^2 coefficient printed as +(n^2+6); it is -(n^2+6)",
    ("spectral_l", (3, 1)): "prefactor printed as 2/(m^2(m^2-4)(m^2-1)); it is 1/(m^2(m^2-4)(m^2-1)(m-3))",
}


def closed_form_kstat(lam, p, corrected=False):
    """Closed power-sum forms of K_lambda for degree <= 4, used as a check on
    :func:`spectral_kstat`.

    By default the formulas are taken as commonly printed.  Two of them do
    not agree with the group-algebra definition (see ``PRINTED_TYPOS``);
    ``corrected=True`` applies the minimal fix to those two.
    """
    lam = IntegerPartition(lam)
    if lam.weight > 4:
        raise CapacityError(f"closed forms exist only up to degree 4, got {lam}")
    n = Fraction(p.n)
    if p.n < lam.weight:
        raise ValueError(f"closed form for {lam} needs n >= {lam.weight}")
    S = [None] + [p[r] for r in range(1, min(p.degree, 4) + 1)]
    key = tuple(lam)
    if key == (1,):
        return S[1] / n
    S1, S2 = S[1], S[2]
    d2 = n * (n**2 - 1)
    if key == (2,):
        return (n * S2 - S1**2) / d2
    if key == (1, 1):
        return (n * S1**2 - S2) / d2
    S3 = S[3]
    d3 = n * (n**2 - 1) * (n**2 - 4)
    if key == (3,):
        return 2 * (2 * S1**3 - 3 * n * S1 * S2 + n**2 * S3) / d3
    if key == (2, 1):
        return (-2 * n * S3 + (n**2 + 2) * S1 * S2 - n * S1**3) / d3
    if key == (1, 1, 1):
        return (S1**3 * (n**2 - 2) - 3 * n * S1 * S2 + 4 * S3) / d3
    S4 = S[4]
    d4 = n**2 * (n**2 - 1) * (n**2 - 4) * (n**2 - 9)
    if key == (4,):
        if corrected:
            d4 = d4 / n
        return 6 * (S4 * (n**3 + n) - 4 * S1 * S3 * (n**2 + 1) + S2**2 * (3 - 2 * n**2)
                    + 10 * n * S1**2 * S2 - 5 * S1**4) / d4
    if key == (3, 1):
        return (2 * (-3 * n * S4 * (n**2 + 1) + S1 * S3 * (12 + 3 * n**2 + n**4) + S2**2 * (6 * n**2 - 9)
                     - 3 * n * S1**2 * S2 * (n**2 + 1)) / d4
                + 2 * (2 * n**2 - 3) * S1**4 / d4)
    if key == (2, 2):
        return ((2 * S4 * (3 * n - 2 * n**3) + 4 * S1 * S3 * (4 * n**2 - 6) + S2**2 * (18 + n**4 - 6 * n**2)
                 - 2 * n * S1**2 * S2 * (n**2 + 6)) / d4
                + (n**2 + 6) * S1**4 / d4)
    if key == (2, 1, 1):
        sign = -1 if corrected else 1
        return (10 * n * S4 - 4 * S1 * S3 * (n**2 + 1) + sign * S2**2 * (n**2 + 6) + n * S1**2 * S2 * (n**2 + 1)
                + (4 - n**2) * S1**4) / (n * (n**2 - 1) * (n**2 - 4) * (n**2 - 9))
    if key == (1, 1, 1, 1):
        return ((-30 * n * S4 + 4 * S1 * S3 * (4 * n**2 - 6) + S2**2 * (3 * n**2 + 18)
                 + 6 * n * S1**2 * S2 * (4 - n**2)) / d4
                + (6 - 8 * n**2 + n**4) * S1**4 / d4)
    raise AssertionError(key)


def _interpolate(fn, i, n):
    """Exact coefficients {nu: c} of a homogeneous degree-i polynomial fn(p)
    in the power sums, by evaluation at rational points."""
    classes = classes_of(i)
    rng = random.Random(i * 1000 + n)
    while True:
        points = [PowerSums(n, tuple(Fraction(rng.randint(-30, 30), rng.randint(1, 7)) for _ in range(max(i, 4))))
                  for _ in classes]
        rows = [[p.product(nu) for nu in classes] for p in points]
        try:
            sol = exact.solve(rows, [fn(p) for p in points])
        except NotInvertibleError:
            continue
        return {nu: c for nu, c in zip(classes, sol) if c}


def closed_form_coefficients(lam, n, corrected=False):
    """Power-sum coefficients {nu: c} of :func:`closed_form_kstat` at size n."""
    lam = IntegerPartition(lam)
    return _interpolate(lambda p: closed_form_kstat(lam, p, corrected), lam.weight, n)


def _annotation(key, k, n):
    if key == (1,):
        return k(1)
    if key == (2,):
        return k(2) / (n + 1)
    if key == (1, 1):
        return k(1, 1) / (n + 1)
    if key == (3,):
        return 2 * k(3) / ((n + 1) * (n + 2))
    if key == (2, 1):
        return (2 * k(2, 1) - n * k(1) * k(2)) / ((n + 1) * (n + 2))
    if key == (1, 1, 1):
        return (2 * k(1, 1, 1) - 3 * k(1) * k(2) + n * (n + 3) * k(1) ** 3) / ((n + 1) * (n + 2))
    raise ValueError(f"no k-statistic annotation for {IntegerPartition(key)}")


def kstat_annotation(lam, x):
    """The classical k-statistic expression printed next to the closed form
    of K_lambda, for lambda of weight <= 3, evaluated on x.

    The forms for (1), (2), (3) and (1^3) are identities.  The ones for (1^2)
    and (1,2) are not (see ``ANNOTATION_MISMATCHES``).
    """
    x = as_sample(x)
    n = Fraction(len(x)) if all(isinstance(v, Fraction) for v in x) else float(len(x))
    return _annotation(tuple(IntegerPartition(lam)), lambda *parts: k_statistic(parts, x), n)


def annotation_coefficients(lam, n):
    """Power-sum coefficients {nu: c} of :func:`kstat_annotation` at size n."""
    lam = IntegerPartition(lam)

    def k_of(p):
        return lambda *parts: sum(c * p.product(nu) for nu, c in k_statistic_coefficients(parts, n).items())

    return _interpolate(lambda p: _annotation(tuple(lam), k_of(p), Fraction(n)), lam.weight, n)


ANNOTATION_MISMATCHES = {
    (1, 1): "k_(1^2)/(n+1) differs from (n S_1^2 - S_2)/(n(n^2-1)); the power-sum form is the one that is inherited",
    (2, 1): "(2 k_(1,2) - n k_1 k_2)/((n+1)(n+2)) differs from the power-sum form, which is the one that is inherited",
}


def closed_form_l(lam, p, corrected=False):
    """Closed power-sum forms of l_(1,2), l_(1^2,2), l_(2^2) and l_(1,3).

    The l_(2^2) denominator is read as m^2 (m^2-1)(m-2)(m-3).  The printed
    prefactor of l_(1,3) is off (see ``PRINTED_TYPOS``); ``corrected=True``
    fixes it.
    """
    lam = IntegerPartition(lam)
    m = Fraction(p.n)
    S1, S2, S3 = p[1], p[2], p[3]
    key = tuple(lam)
    if key == (2, 1):
        return ((m + 1) * S1 * S2 - S1**3 - m * S3) / (m * (m - 1) * (m + 1) * (m - 2))
    S4 = p[4]
    if key == (2, 1, 1):
        return ((2 * m * S4 + (m + 3) * S1**2 * S2 - (2 * m + 2) * S1 * S3 - m * S2**2 - S1**4)
                / (m * (m - 1) * (m + 1) * (m - 2) * (m - 3)))
    if key == (2, 2):
        return ((S1**4 + (m**2 - 3 * m + 3) * S2**2 + (4 * m - 4) * S1 * S3 - 2 * m * S1**2 * S2
                 + (m - m**2) * S4) / (m**2 * (m**2 - 1) * (m - 2) * (m - 3)))
    if key == (3, 1):
        pre = 1 / (m - 3) if corrected else 2
        return (pre / ((m**2 - 4) * (m**2 - 1) * m**2)
                * (-S4 * m * (m**2 + 1) + S1 * S3 * (m**3 + m**2 + 4) + S2**2 * (2 * m**2 - 3)
                   - m * S1**2 * S2 * (3 * m + 1) + S1**4 * (2 * m - 1)))
    raise ValueError(f"no closed form tabulated for l_{lam}")


def conditional_moment_formulas(which, x, m, literal=False):
    """Closed forms for conditional (co)variances of K statistics of a
    spectral sample of size m from x.

    ``which`` is ``"var_k1"``, ``"cov_k1_k2"`` or ``"var_k2"``:

        var K_1       = kt_2 (1/m - 1/n)
        cov(K_1, K_2) = 2 kt_3 (1/m - 1/n)
        var K_2       = 2 kt_(2^2) (1/(m^2-1) - 1/(n^2-1))
                        + 2 kt_4 (n-m)(2m^2n^2 - 3n^2 - 3m^2 - mn + 3) / (nm(m^2-1)(n^2-1))

    where kt_lambda = kappa~(x)(lambda) carries no (j-1)! prefactor.  These
    agree with the exact conditional expectation.  ``literal=True`` puts
    K_lambda = prod (lambda_j-1)! kt_lambda in place of kt_lambda, which
    changes the covariance by a factor 2 and the K_4 term of var K_2 by 6.
    """
    x = as_sample(x)
    n = len(x)
    if m > n:
        raise ValueError(f"sample size m = {m} exceeds population size n = {n}")
    if m < 1:
        raise ValueError("m must be >= 1")
    exact_field = all(isinstance(v, Fraction) for v in x)
    mm, nn = (Fraction(m), Fraction(n)) if exact_field else (float(m), float(n))

    def stat(lam):
        value = spectral_kstat(lam, x)
        return value if literal else value / kstat_prefactor(IntegerPartition(lam))

    if which == "var_k1":
        return stat((2,)) * (1 / mm - 1 / nn)
    if which == "cov_k1_k2":
        return 2 * stat((3,)) * (1 / mm - 1 / nn)
    if which == "var_k2":
        if m < 2:
            raise ValueError("var_k2 needs m >= 2")
        term1 = 2 * stat((2, 2)) * (1 / (mm**2 - 1) - 1 / (nn**2 - 1))
        poly = (nn - mm) * (2 * mm**2 * nn**2 - 3 * nn**2 - 3 * mm**2 - mm * nn + 3)
        term2 = 2 * stat((4,)) * poly / (nn * mm * (mm**2 - 1) * (nn**2 - 1))
        return term1 + term2
    raise ValueError(f"unknown conditional moment {which!r}")


def exact_conditional_covariance(a, b, x, m, kinds=("spectral_k", "spectral_k")):
    """cov(A(y), B(y) | x) in exact arithmetic, for statistics A, B given as
    (kind, lambda) with |a| + |b| <= len(x).

    Uses E[prod_j S_{nu_j}(y) | x] = (mu(I_m) . kappa~(x))(nu) on the power-sum
    expansions of A and B.
    """
    a, b = IntegerPartition(a), IntegerPartition(b)
    ca = statistic_coefficients(kinds[0], a, m)
    cb = statistic_coefficients(kinds[1], b, m)
    expect = expected_power_products(x, m, a.weight + b.weight)
    second = sum(u * v * expect[IntegerPartition(tuple(nu) + tuple(eta))]
                 for nu, u in ca.items() for eta, v in cb.items())
    mean_a = sum(u * expected_power_products(x, m, a.weight)[nu] for nu, u in ca.items())
    mean_b = sum(v * expected_power_products(x, m, b.weight)[eta] for eta, v in cb.items())
    return second - mean_a * mean_b


def _partition_product(lam, values):
    out = 1
    for part in lam:
        out = out * values[part - 1]
    return out


def trace_moments_from_scaled_cumulants(c, m, i):
    """E[(Tr Y)^i] = sum_{lambda |- i} d_lambda m^l(lambda) prod_j c_{lambda_j},
    where c_j are the cumulants of Tr Y divided by m."""
    if len(c) < i:
        raise ValueError(f"need c_1..c_{i}, got {len(c)} values")
    return sum(coeff_d(lam) * Fraction(m) ** lam.length * _partition_product(lam, c) for lam in classes_of(i))


def scaled_cumulants_from_trace_moments(M, m):
    """Invert :func:`trace_moments_from_scaled_cumulants` degree by degree.

    ``M[j-1] = E[(Tr Y)^j]``; returns c_1..c_d.
    """
    c = []
    for i in range(1, len(M) + 1):
        c.append(0)
        rest = trace_moments_from_scaled_cumulants(c, m, i)
        # the (i) partition contributes d_(i) m c_i = m c_i
        c[-1] = (M[i - 1] - rest) / m
    return c


def cumulant_products_from_trace_moments(lam, M, m):
    """prod_j c_{lambda_j} as a sum over tuples (eta_1 |- lambda_1, ...,
    eta_r |- lambda_r) of prod_j (-1)^(l(eta_j)-1) (l(eta_j)-1)! d_{eta_j} / m
    times the trace-moment product over the parts of eta_1 + ... + eta_r.

    ``M[t-1] = E[(Tr Y)^t]``.
    """
    lam = IntegerPartition(lam)
    if len(M) < lam[0]:
        raise ValueError(f"need trace moments up to order {lam[0]}, got {len(M)}")
    total = 0
    for etas in cartesian(*(classes_of(part) for part in lam)):
        weight = Fraction(1)
        for eta in etas:
            weight *= Fraction((-1) ** (eta.length - 1) * factorial(eta.length - 1)) * coeff_d(eta) / m
        merged = [t for eta in etas for t in eta]
        total += weight * _partition_product(merged, M)
    return total
