import numpy as np

from fatpoints.services.field_algebra import (
    RowSpace,
    cell_digest,
    enumerate_monomials,
    monomial_index,
    projectively_equal,
    random_points,
    rank_mod_p,
    seeded_generator,
)
from fatpoints.services.uples import binomial

MERSENNE_61 = 2 ** 61 - 1


def test_enumerate_monomials():
    assert list(enumerate_monomials(1, 2)) == [(2, 0), (1, 1), (0, 2)]
    assert list(enumerate_monomials(2, 0)) == [(0, 0, 0)]
    assert len(enumerate_monomials(4, 5)) == 126
    for n in range(1, 4):
        for m in range(0, 6):
            assert len(enumerate_monomials(n, m)) == binomial(n + m, n)


def test_monomial_index_is_inverse():
    index = monomial_index(2, 3)
    for position, exponent in enumerate(enumerate_monomials(2, 3)):
        assert index[exponent] == position


def test_rank_small_matrices():
    assert rank_mod_p([[1, 2], [2, 4]], 7) == 1
    assert rank_mod_p([[1, 2], [3, 4]], 7) == 2
    assert rank_mod_p([[1, 1], [1, 1]], 2) == 1
    assert rank_mod_p(np.eye(5, dtype=np.int64), 11) == 5
    assert rank_mod_p(np.zeros((0, 3), dtype=np.int64), 5) == 0


def test_rank_depends_on_characteristic():
    # det = 6
    matrix = [[2, 0], [0, 3]]
    assert rank_mod_p(matrix, 5) == 2
    assert rank_mod_p(matrix, 3) == 1


def test_row_space_counts_new_rows():
    space = RowSpace(3, 101)
    assert space.extend([[1, 0, 0], [2, 0, 0]]) == 1
    assert space.extend([[0, 1, 0], [1, 1, 0]]) == 1
    assert space.extend([[5, 7, 9]]) == 1
    assert space.rank == 3
    assert space.extend([[1, 2, 3]]) == 0


def test_row_space_copy_is_independent():
    space = RowSpace(2, 13)
    space.extend([[1, 1]])
    clone = space.copy()
    clone.extend([[0, 1]])
    assert space.rank == 1
    assert clone.rank == 2


def test_large_modulus_uses_exact_objects():
    matrix = [[MERSENNE_61 - 1, 1], [1, MERSENNE_61 - 1]]
    # rows are negatives of each other
    assert rank_mod_p(matrix, MERSENNE_61) == 1
    assert rank_mod_p([[3, 5], [7, 11]], MERSENNE_61) == 2


def test_projective_equality():
    assert projectively_equal((1, 2, 3), (2, 4, 6), 7)
    assert projectively_equal((1, 2, 3), (3, 6, 2), 7)
    assert not projectively_equal((1, 2, 3), (1, 2, 4), 7)


def test_seeding_is_reproducible():
    key = cell_digest(2, "2,2", 4)
    assert key == cell_digest(2, "2,2", 4)
    assert key != cell_digest(2, "2,2", 5)
    first = random_points(seeded_generator(0, key, 0), 5, 3, 1000003)
    again = random_points(seeded_generator(0, key, 0), 5, 3, 1000003)
    other = random_points(seeded_generator(0, key, 1), 5, 3, 1000003)
    assert first == again
    assert first != other


def test_random_points_are_off_hyperplane_and_distinct():
    points = random_points(seeded_generator(3, 17, 0), 40, 1, 101)
    assert all(p[0] != 0 for p in points)
    for i, p in enumerate(points):
        for q in points[:i]:
            assert not projectively_equal(p, q, 101)
