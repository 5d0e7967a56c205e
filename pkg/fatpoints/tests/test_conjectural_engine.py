import itertools

import numpy as np
import pytest

from fatpoints.engines.conjectural_engine import (
    ambient_dim,
    balancing_compare,
    complete_intersection_g,
    f,
    f_prime,
    froberg_series,
    g,
    g_obstruction_sum,
    g_prime,
    g_recursion,
    g_value,
    increments_by_k,
    scheme_degree,
)
from fatpoints.services.errors import PreconditionError
from fatpoints.services.uples import Uple, binomial


def _small_uples(d_max, k_max):
    for d in range(1, d_max + 1):
        for combo in itertools.combinations_with_replacement(range(k_max, 0, -1), d):
            yield Uple(combo)


def test_f_prime_values():
    assert f_prime(2, Uple.of(1, 1), 2) == 1
    assert f_prime(2, Uple(), 2) == 6
    assert f_prime(3, Uple.of(2, 2), 2) == 8
    assert f_prime(2, Uple.of(0, 3), 4) == 0


def test_series_ends_in_f_prime():
    for n in (1, 2, 3):
        for uple in _small_uples(4, 4):
            for m in range(0, 7):
                assert froberg_series(n, uple, m)[-1] == f_prime(n, uple, m)


def test_f_truncation():
    value = f(2, Uple.of(1, 1), 2)
    assert (value.value, value.clamped) == (1, False)
    value = f(2, Uple.of(3, 3, 3, 3, 3), 4)
    assert (value.value, value.clamped) == (0, False)
    value = f(2, Uple.of(0), 5)
    assert (value.value, value.clamped) == (0, False)
    # series 1 - t: F' = -1 at degree 1
    value = f(1, Uple.of(1, 1, 1), 1)
    assert (value.value, value.clamped) == (0, True)
    assert f(2, Uple.of(2, 2, 2), 6).value == 0


def test_g_values():
    assert g_value(2, Uple.of(2, 2), 2) == 5
    value = g(2, Uple.of(3), 2)
    assert (value.value, value.clamped) == (6, True)
    assert g_value(3, Uple.of(2, 2, 2, 2, 2), 3) == 20
    assert g_value(2, Uple.of(2, 2, 2, 2, 2), 4) == 15


def test_g_rejects_zero_multiplicity():
    with pytest.raises(PreconditionError):
        g(2, Uple.of(2, 0), 3)
    with pytest.raises(PreconditionError):
        g(0, Uple.of(1), 3)


def test_g_permutation_invariant():
    assert g(3, Uple.of(3, 1, 2), 4) == g(3, Uple.of(1, 2, 3), 4)


def test_single_point():
    for n in range(1, 5):
        for k in range(1, 6):
            for m in range(0, 8):
                expected = min(ambient_dim(n, m), binomial(n + k - 1, n))
                assert g_value(n, Uple.of(k), m) == expected


def test_g_is_bounded_by_ambient():
    for n in (1, 2, 3):
        for uple in _small_uples(4, 3):
            for m in range(0, 7):
                value = g(n, uple, m)
                assert 0 <= value.value <= value.ambient_dim


def test_g_on_the_line_is_maximal_rank():
    for uple in _small_uples(4, 4):
        for m in range(0, 9):
            assert g_value(1, uple, m) == min(uple.size(), m + 1)


def test_g_monotone_in_multiplicities_and_points():
    for n in (2, 3):
        for uple in _small_uples(3, 3):
            for m in range(0, 6):
                base = g_value(n, uple, m)
                for index in range(len(uple)):
                    assert g_value(n, uple.with_entry(index, uple[index] + 1), m) >= base
                assert g_value(n, Uple((*uple, 1)), m) >= base


def test_g_prime_agrees_below_ambient():
    for uple in _small_uples(3, 3):
        for m in range(2, 6):
            value = g(2, uple, m)
            if value.value < value.ambient_dim:
                assert g_prime(2, uple, m) == value.value


def test_obstruction_sum_examples():
    assert g_obstruction_sum(2, Uple.of(2, 2), 2) == 5
    assert g_obstruction_sum(3, Uple.of(2, 2), 2) == 7
    assert g_obstruction_sum(2, Uple.of(1, 1), 1) == 2
    with pytest.raises(PreconditionError):
        g_obstruction_sum(2, Uple.of(3), 2)


def test_recursion_examples():
    assert g_recursion(2, Uple.of(2, 2), 2) == 5
    assert g_recursion(2, Uple.of(1, 1), 1) == 2
    with pytest.raises(PreconditionError):
        g_recursion(1, Uple.of(1, 1), 1)
    with pytest.raises(PreconditionError):
        g_recursion(2, Uple.of(3), 2)


def test_identities_on_sampled_uples():
    rng = np.random.default_rng(20240601)
    checked_sum = checked_recursion = 0
    for _ in range(1000):
        n = int(rng.integers(1, 4))
        d = int(rng.integers(1, 6))
        m = int(rng.integers(0, 9))
        uple = Uple(tuple(int(k) for k in rng.integers(1, 5, size=d)))
        value = g(n, uple, m)
        if value.value < value.ambient_dim:
            assert g_obstruction_sum(n, uple, m) == value.value
            checked_sum += 1
        try:
            recursed = g_recursion(n, uple, m)
        except PreconditionError:
            continue
        assert recursed == value.value
        checked_recursion += 1
    assert checked_sum > 100
    assert checked_recursion > 20


def test_complete_intersection_formula():
    for n in range(1, 5):
        for d in range(1, n + 2):
            for m in range(1, 7):
                for j in range(1, m + 1):
                    assert complete_intersection_g(n, d, j, m) == g_value(n, Uple((m + 1 - j,) * d), m)
    with pytest.raises(PreconditionError):
        complete_intersection_g(2, 4, 1, 2)


def test_complete_intersection_with_n_plus_one_generators():
    # two double points on P^1 fill degree 2
    assert complete_intersection_g(1, 2, 1, 2) == 3
    assert complete_intersection_g(2, 3, 2, 3) == g_value(2, Uple.of(2, 2, 2), 3)


def test_balancing():
    witness = balancing_compare(2, Uple.of(5, 1), 3)
    assert (witness.g_uple, witness.g_balanced) == (10, 10)
    assert witness.ordered and witness.equality_iff_full
    witness = balancing_compare(2, Uple.of(3, 1), 4)
    assert (witness.g_uple, witness.g_balanced) == (7, 6)
    assert witness.ordered and witness.equality_iff_full
    assert balancing_compare(3, Uple.of(4, 2), 3).ordered
    # equal values below the ambient dimension
    witness = balancing_compare(2, Uple.of(7, 5, 5), 9)
    assert (witness.g_uple, witness.g_balanced) == (52, 52)
    assert witness.ordered and not witness.equality_iff_full
    with pytest.raises(PreconditionError):
        balancing_compare(2, Uple.of(3, 2), 3)


def test_increments_by_k():
    assert increments_by_k(2, Uple.of(5, 2, 2), 4) == [7, 9, 12, 14, 15]


def test_scheme_degree():
    assert scheme_degree(2, Uple.of(2, 2, 2, 2, 2)) == 15
    assert scheme_degree(5, Uple((3,) * 10)) == 210
