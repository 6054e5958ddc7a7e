import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import rational_samples, random_rationals, rationals
from spectralk.classical import k_statistic, power_sums
from spectralk.combinat import IntegerPartition, coeff_d, enumerate_partitions, kstat_prefactor
from spectralk.errors import CapacityError, DegreeExceedsSampleError
from spectralk.spectral import (
    closed_form_coefficients,
    closed_form_kstat,
    closed_form_l,
    conditional_moment_formulas,
    cumulant_products_from_trace_moments,
    exact_conditional_covariance,
    expected_power_products,
    generalized_polykay_l,
    kappa_tilde,
    kstat_annotation,
    l_coefficients,
    mu_identity_inverse,
    mu_of_spectrum,
    normalized_spectral,
    scaled_cumulants_from_trace_moments,
    spectral_kstat,
    statistic_coefficients,
    trace_moments_from_scaled_cumulants,
)

ALL3 = [lam for i in range(1, 4) for lam in enumerate_partitions(i)]
ALL4 = [lam for i in range(1, 5) for lam in enumerate_partitions(i)]
PRINTED_OK = [lam for lam in ALL4 if tuple(lam) not in ((4,), (2, 1, 1))]


def K(lam, x):
    return spectral_kstat(lam, x)


def kt(lam, x):
    lam = IntegerPartition(lam)
    return kappa_tilde(x, lam.weight)[lam]


def test_mu_of_spectrum_examples():
    p = power_sums([1, 2, 3], 2)
    mu = mu_of_spectrum(p, 2)
    assert mu[(1, 1)] == 36 and mu[(2,)] == 14
    assert mu_of_spectrum(power_sums([1, 2, 3], 1), 1).vector() == [6]
    c = Fraction(2, 3)
    mu = mu_of_spectrum(power_sums([c] * 4, 3), 3)
    assert mu[(2, 1)] == (4 * c**2) * (4 * c)
    with pytest.raises(ValueError):
        mu_of_spectrum(power_sums([1, 2], 1), 2)


def test_spectral_kstat_examples():
    x = [1, 2, 3]
    assert K((1,), x) == 2
    assert K((2,), x) == Fraction(1, 4)
    assert K((1, 1), x) == Fraction(47, 12)
    assert K((3,), x) == 0


def test_degree_exceeds_sample_size():
    with pytest.raises(DegreeExceedsSampleError, match="degree exceeds sample size"):
        K((1, 1, 1), [1, 2])
    with pytest.raises(DegreeExceedsSampleError):
        mu_identity_inverse(2, 3)


def test_spectral_cap():
    with pytest.raises(CapacityError):
        K((7,), range(1, 9))


def test_closed_form_examples():
    x = [1, 2, 3]
    assert closed_form_kstat((1, 1), power_sums(x, 2)) == Fraction(47, 12)
    assert closed_form_kstat((2,), power_sums([1, 2], 2)) == Fraction(1, 6)
    c = Fraction(5, 3)
    assert closed_form_kstat((4,), power_sums([c] * 6, 4)) == 0
    with pytest.raises(CapacityError):
        closed_form_kstat((5,), power_sums(range(1, 8), 5))
    with pytest.raises(ValueError):
        closed_form_kstat((2, 1), power_sums([1, 2], 3))


@pytest.mark.parametrize("lam", PRINTED_OK, ids=str)
def test_algorithm_matches_printed_closed_form(lam):
    rng = random.Random(sum(lam) * 10 + len(lam))
    for n in (5, 7, 12):
        x = random_rationals(rng, n)
        assert K(lam, x) == closed_form_kstat(lam, power_sums(x, 4))


@pytest.mark.parametrize("lam", [(4,), (2, 1, 1)], ids=str)
def test_two_printed_degree4_forms_need_minimal_correction(lam):
    rng = random.Random(99)
    for n in (5, 8, 12):
        x = random_rationals(rng, n)
        p = power_sums(x, 4)
        assert K(lam, x) == closed_form_kstat(lam, p, corrected=True)
        assert K(lam, x) != closed_form_kstat(lam, p)


def test_printed_k4_denominator_is_off_by_factor_n():
    x = random_rationals(random.Random(5), 7)
    assert closed_form_kstat((4,), power_sums(x, 4)) * 7 == K((4,), x)


def test_printed_k4_and_k112_contradict_l_table():
    # l_(1^2,2) and l_(2^2) have printed power-sum forms; with the printed K_(4)
    # and K_(1^2,2) the l-table relations l = kt_(.) - ... fail, with the corrected ones they hold
    x = random_rationals(random.Random(8), 8)
    p = power_sums(x, 4)

    def kt_from_closed(lam, corrected):
        return closed_form_kstat(lam, p, corrected) / kstat_prefactor(lam)

    for corrected, expect in ((True, True), (False, False)):
        l22 = kt_from_closed((2, 2), corrected) - kt_from_closed((4,), corrected)
        l112 = (kt_from_closed((2, 1, 1), corrected) - 2 * kt_from_closed((3, 1), corrected)
                - kt_from_closed((2, 2), corrected) + 2 * kt_from_closed((4,), corrected))
        assert (l22 == closed_form_l((2, 2), p) and l112 == closed_form_l((2, 1, 1), p)) is expect


def test_closed_form_coefficients_locate_mismatches():
    for lam in ALL4:
        algo = statistic_coefficients("spectral_k", lam, 6)
        assert closed_form_coefficients(lam, 6, corrected=True) == algo
        assert (closed_form_coefficients(lam, 6) == algo) is (lam in PRINTED_OK)


@pytest.mark.parametrize("lam", [(1,), (2,), (3,), (1, 1, 1)], ids=str)
def test_k_annotation_identities(lam):
    x = random_rationals(random.Random(2), 6)
    assert kstat_annotation(lam, x) == K(lam, x)


def test_k_annotation_for_one_squared_is_not_an_identity():
    # the printed k_(1^2)/(n+1) against the printed power-sum form, which the algorithm reproduces
    x = [1, 2]
    assert K((1, 1), x) == Fraction(13, 6)
    assert kstat_annotation((1, 1), x) == Fraction(2, 3)


def test_k_annotation_for_one_two_is_not_an_identity():
    x = random_rationals(random.Random(4), 5)
    assert kstat_annotation((2, 1), x) != K((2, 1), x)


@given(rational_samples(4, 6), st.sampled_from(ALL4), st.randoms())
def test_symmetric(x, lam, r):
    y = list(x)
    r.shuffle(y)
    assert K(lam, x) == K(lam, y)


@given(rational_samples(4, 6), st.sampled_from(ALL4), rationals)
def test_homogeneous(x, lam, a):
    assert K(lam, [a * v for v in x]) == a ** lam.weight * K(lam, x)


@given(rational_samples(4, 6), st.integers(2, 4), rationals)
def test_single_index_translation_invariant(x, r, c):
    mean = sum(x) / len(x)
    assert K((r,), [v - mean for v in x]) == K((r,), x)
    assert K((r,), [v + c for v in x]) == K((r,), x)


def test_zero_mean_k4_direction():
    rng = random.Random(21)
    n = 7
    ratios = set()
    for _ in range(4):
        x = random_rationals(rng, n)
        mean = sum(x) / n
        x = [v - mean for v in x]
        p = power_sums(x, 4)
        ratios.add(K((4,), x) / (n * (n * n + 1) * p[4] - (2 * n * n - 3) * p[2] ** 2))
    assert len(ratios) == 1


def test_constant_spectrum_kills_parts_at_least_two():
    x = [Fraction(7, 3)] * 5
    for lam in ALL4:
        if min(lam) >= 2:
            assert K(lam, x) == 0
            assert generalized_polykay_l(lam, x) == 0


def test_polykay_l_examples():
    x = [1, 2, 3]
    assert generalized_polykay_l((1, 1), x) == Fraction(11, 3)
    assert generalized_polykay_l((1, 1), x) == kt((1, 1), x) - kt((2,), x)
    y = random_rationals(random.Random(1), 6)
    for i in range(1, 5):
        assert generalized_polykay_l((i,), y) == kt((i,), y)


L_TABLE = {
    (1,): {(1,): 1},
    (1, 1): {(1, 1): 1, (2,): -1},
    (2, 1): {(2, 1): 1, (3,): -1},
    (1, 1, 1): {(1, 1, 1): 1, (2, 1): -3, (3,): 2},
    (3, 1): {(3, 1): 1, (4,): -1},
    (2, 2): {(2, 2): 1, (4,): -1},
    (2, 1, 1): {(2, 1, 1): 1, (3, 1): -2, (2, 2): -1, (4,): 2},
    (1, 1, 1, 1): {(1, 1, 1, 1): 1, (2, 1, 1): -6, (3, 1): 8, (2, 2): 3, (4,): -6},
}


@pytest.mark.parametrize("lam", list(L_TABLE), ids=lambda t: str(IntegerPartition(t)))
def test_l_table_rows(lam):
    assert l_coefficients(lam) == {IntegerPartition(k): v for k, v in L_TABLE[lam].items()}
    rng = random.Random(len(lam))
    for n in (6, 8):
        x = random_rationals(rng, n)
        assert generalized_polykay_l(lam, x) == sum(c * kt(nu, x) for nu, c in L_TABLE[lam].items())


@pytest.mark.parametrize("r", range(1, 5))
def test_l_one_power_equals_classical_polykay(r):
    rng = random.Random(r)
    for n in (4, 5, 7):
        if n < r:
            continue
        x = random_rationals(rng, n)
        assert generalized_polykay_l((1,) * r, x) == k_statistic((1,) * r, x)


@pytest.mark.parametrize("lam", [(2, 1), (2, 1, 1), (2, 2)], ids=str)
def test_l_printed_power_sum_forms(lam):
    rng = random.Random(17)
    for n in (5, 6, 9):
        x = random_rationals(rng, n)
        assert generalized_polykay_l(lam, x) == closed_form_l(lam, power_sums(x, 4))


def test_l_one_three_printed_prefactor_is_off():
    rng = random.Random(23)
    for n in (5, 6, 9):
        x = random_rationals(rng, n)
        p = power_sums(x, 4)
        assert generalized_polykay_l((3, 1), x) == closed_form_l((3, 1), p, corrected=True)
        assert generalized_polykay_l((3, 1), x) != closed_form_l((3, 1), p)


def test_l_two_squared_denominator_readings_agree_at_m_equals_n():
    # the printed denominator mixes m and n; on a full spectrum n = m, so both readings coincide
    x = random_rationals(random.Random(29), 6)
    assert generalized_polykay_l((2, 2), x) == closed_form_l((2, 2), power_sums(x, 4))


def test_normalized_factors():
    x = random_rationals(random.Random(31), 6)
    assert normalized_spectral((1,), x) == kt((1,), x)
    assert normalized_spectral((2,), x[:3]) == 3 * kt((2,), x[:3])
    assert normalized_spectral((2, 2), x) == 36 * kt((2, 2), x)
    assert normalized_spectral((2, 2), x, kind="polykay") == 36 * generalized_polykay_l((2, 2), x)
    with pytest.raises(ValueError):
        normalized_spectral((2,), x, kind="other")


@pytest.mark.parametrize("kind", ["spectral_k", "spectral_l"])
def test_statistic_coefficients_evaluate_the_statistic(kind):
    x = random_rationals(random.Random(37), 7)
    p = power_sums(x, 4)
    for lam in ALL4:
        value = sum(c * p.product(nu) for nu, c in statistic_coefficients(kind, lam, 7).items())
        assert value == (K(lam, x) if kind == "spectral_k" else generalized_polykay_l(lam, x))


def test_trace_moment_examples():
    c = [Fraction(3, 2), Fraction(-1, 5)]
    m = 4
    assert trace_moments_from_scaled_cumulants(c, m, 1) == m * c[0]
    assert trace_moments_from_scaled_cumulants(c, m, 2) == m * c[1] + m * m * c[0] ** 2
    with pytest.raises(ValueError):
        trace_moments_from_scaled_cumulants(c, m, 3)


@given(st.lists(rationals, min_size=1, max_size=5), st.integers(1, 6))
def test_trace_moment_round_trip(c, m):
    M = [trace_moments_from_scaled_cumulants(c, m, i) for i in range(1, len(c) + 1)]
    assert scaled_cumulants_from_trace_moments(M, m) == c


@given(st.lists(rationals, min_size=4, max_size=4), st.integers(1, 5))
def test_cumulant_products_consistent_with_triangular_inversion(c, m):
    M = [trace_moments_from_scaled_cumulants(c, m, i) for i in range(1, 5)]
    assert cumulant_products_from_trace_moments((1,), M, m) == M[0] / m
    for i in range(1, 5):
        for lam in enumerate_partitions(i):
            target = 1
            for part in lam:
                target *= c[part - 1]
            assert cumulant_products_from_trace_moments(lam, M, m) == target


def test_single_cumulant_weight_two():
    # lambda = (2): (M_2 - M_1^2) / m, the eta = (1^2) term carrying (-1) 1! d_(1^2) / m
    M = [Fraction(5), Fraction(31)]
    assert coeff_d((1, 1)) == 1
    assert cumulant_products_from_trace_moments((2,), M, 3) == (M[1] - M[0] ** 2) / 3


def test_conditional_formula_examples():
    x = [1, 2, 3, 4]
    assert conditional_moment_formulas("var_k1", x, 2) == K((2,), x) * (Fraction(1, 2) - Fraction(1, 4))
    for which in ("var_k1", "cov_k1_k2", "var_k2"):
        assert conditional_moment_formulas(which, x, 4) == 0
    with pytest.raises(ValueError):
        conditional_moment_formulas("var_k1", x, 5)
    with pytest.raises(ValueError):
        conditional_moment_formulas("other", x, 2)


@pytest.mark.parametrize("which,a,b", [("var_k1", (1,), (1,)), ("cov_k1_k2", (1,), (2,)), ("var_k2", (2,), (2,))])
def test_conditional_formulas_equal_exact_conditional_moments(which, a, b):
    rng = random.Random(41)
    for n in (4, 6, 7):
        x = random_rationals(rng, n)
        for m in range(2, n + 1):
            assert conditional_moment_formulas(which, x, m) == exact_conditional_covariance(a, b, x, m)


def test_conditional_formulas_read_with_prefactored_k_are_wrong():
    # with K_lambda in place of kt_lambda the covariance doubles and the K_4 term of var K_2 grows sixfold
    x = random_rationals(random.Random(43), 6)
    m = 3
    exact_cov = exact_conditional_covariance((1,), (2,), x, m)
    assert conditional_moment_formulas("cov_k1_k2", x, m, literal=True) == 2 * exact_cov
    assert conditional_moment_formulas("var_k2", x, m, literal=True) != exact_conditional_covariance((2,), (2,), x, m)
    assert conditional_moment_formulas("var_k1", x, m, literal=True) == exact_conditional_covariance((1,), (1,), x, m)


def test_expected_power_products_inherit_statistics():
    x = random_rationals(random.Random(47), 7)
    for m in (3, 5, 7):
        for lam in ALL3:
            expect = expected_power_products(x, m, lam.weight)
            coeffs = statistic_coefficients("spectral_k", lam, m)
            assert sum(c * expect[nu] for nu, c in coeffs.items()) == K(lam, x)


def test_float_input_gives_float_output():
    x = [1.0, 2.5, 4.0, 7.0]
    assert isinstance(K((2,), x), float)
    assert abs(K((2,), x) - float(K((2,), [Fraction(v) for v in x]))) < 1e-12
