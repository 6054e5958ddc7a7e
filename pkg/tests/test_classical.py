import random
from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import rational_samples, random_rationals, rationals
from oracles import augmented_brute
from spectralk.classical import (
    TUKEY_IDENTITIES,
    augmented,
    k_statistic,
    k_statistic_coefficients,
    power_sums,
    tukey_identity_residual,
)
from spectralk.combinat import enumerate_partitions
from spectralk.errors import CapacityError

ALL4 = [lam for i in range(1, 5) for lam in enumerate_partitions(i)]


def test_power_sums_examples():
    p = power_sums([1, 2, 3], 3)
    assert p.n == 3 and p.S == (6, 14, 36)
    assert p[2] == 14
    with pytest.raises(IndexError):
        p[4]
    c = Fraction(7, 2)
    assert power_sums([c] * 5, 3).S == (5 * c, 5 * c**2, 5 * c**3)
    with pytest.raises(ValueError):
        power_sums([], 2)


def test_augmented_examples():
    assert augmented((1, 1), [1, 2, 3]) == 22
    assert augmented((1, 1, 1), [1, 2, 3]) == 36
    assert augmented((3,), [1, 2, 3]) == 36
    assert augmented((1, 1), [1, 2, 3], normalized=True) == Fraction(22, 6)
    with pytest.raises(ValueError):
        augmented((1, 1, 1), [1, 2])


@given(rational_samples(4, 6), st.sampled_from([lam for lam in ALL4 if lam.length <= 4]))
def test_augmented_matches_injective_tuple_sum(x, lam):
    assert augmented(lam, x) == augmented_brute(lam, x)


def test_k_statistic_examples():
    x = [1, 2, 3]
    assert k_statistic((2,), x) == 1
    assert k_statistic((1, 1), x) == Fraction(11, 3)
    assert k_statistic((3,), [Fraction(5, 2)] * 4) == 0
    with pytest.raises(CapacityError):
        k_statistic((5,), range(1, 8))
    with pytest.raises(ValueError):
        k_statistic((1, 1, 1), [1, 2])


def test_k2_is_sample_variance():
    x = [Fraction(v) for v in (3, 1, 4, 1, 5, 9, 2)]
    mean = sum(x) / len(x)
    assert k_statistic((2,), x) == sum((v - mean) ** 2 for v in x) / (len(x) - 1)


@pytest.mark.parametrize("lam", ALL4, ids=str)
def test_srs_inheritance_exhaustive(lam):
    x = [Fraction(v) for v in (0, 1, 1, 3, 7, -2, 5)]
    subsets = list(combinations(x, 4))
    assert len(subsets) == 35
    assert sum(k_statistic(lam, s) for s in subsets) / len(subsets) == k_statistic(lam, x)


@given(rational_samples(5, 7), st.sampled_from(ALL4), st.randoms())
def test_k_statistic_symmetric(x, lam, r):
    y = list(x)
    r.shuffle(y)
    assert k_statistic(lam, x) == k_statistic(lam, y)


@given(rational_samples(5, 7), st.integers(2, 4), rationals)
def test_single_k_translation_invariant(x, r, c):
    assert k_statistic((r,), [v + c for v in x]) == k_statistic((r,), x)


@given(rational_samples(5, 7), st.sampled_from(ALL4), rationals)
def test_k_statistic_homogeneous(x, lam, a):
    assert k_statistic(lam, [a * v for v in x]) == a ** lam.weight * k_statistic(lam, x)


@pytest.mark.parametrize("lam", ALL4, ids=str)
def test_power_sum_coefficients_reproduce_k(lam):
    rng = random.Random(7)
    for n in (4, 6):
        x = random_rationals(rng, n)
        p = power_sums(x, 4)
        value = sum(c * p.product(nu) for nu, c in k_statistic_coefficients(lam, n).items())
        assert value == k_statistic(lam, x)


@pytest.mark.parametrize("ident", TUKEY_IDENTITIES)
def test_tukey_identities_hold(ident):
    rng = random.Random(3)
    for n in (5, 6, 8):
        assert tukey_identity_residual(ident, random_rationals(rng, n)) == 0
    if ident in ("1", "1^2"):
        assert tukey_identity_residual(ident, [1, 2, 3]) == 0


@pytest.mark.parametrize("ident", ["2^2", "1^4"])
def test_tukey_printed_k4_coefficients_do_not_vanish(ident):
    # the k_4 coefficients commonly printed in these two rows are -1/m and -6m/(m+1)
    x = random_rationals(random.Random(11), 6)
    assert tukey_identity_residual(ident, x, printed=True) != 0
    assert tukey_identity_residual(ident, x) == 0


def test_tukey_unknown_identity():
    with pytest.raises(ValueError):
        tukey_identity_residual("5", [1, 2, 3])
