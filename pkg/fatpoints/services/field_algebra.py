"""
Exact linear algebra over a prime field GF(p).

Matrices are numpy arrays of residues. For moduli whose square fits in int64
the arithmetic is vectorized on int64; larger moduli fall back to object
arrays of Python ints (slow but exact).
"""

from __future__ import annotations

import hashlib
import logging
from functools import lru_cache
from typing import Dict, List, Sequence, Tuple

import numpy as np

logger = logging.getLogger(__name__)

_INT64_SAFE = 3_037_000_499  # floor(sqrt(2**63 - 1))

Exponent = Tuple[int, ...]


def field_dtype(modulus: int):
    return np.int64 if modulus <= _INT64_SAFE else object


@lru_cache(maxsize=None)
def enumerate_monomials(n: int, m: int) -> Tuple[Exponent, ...]:
    """
    Exponent vectors in n+1 variables of total degree m, graded-lex order:
    descending lexicographic on (e_0, ..., e_n). Length C(n+m, n).
    """
    if n < 0 or m < 0:
        return ()
    if n == 0:
        return ((m,),)
    result = []
    for first in range(m, -1, -1):
        for rest in enumerate_monomials(n - 1, m - first):
            result.append((first,) + rest)
    return tuple(result)


@lru_cache(maxsize=None)
def monomial_index(n: int, m: int) -> Dict[Exponent, int]:
    return {exponent: position for position, exponent in enumerate(enumerate_monomials(n, m))}


class RowSpace:
    """
    Incrementally maintained row echelon basis over GF(p).

    Every stored row has a unit pivot and is zero in the pivot columns of
    the rows stored before it, so reducing a new block against the basis
    in insertion order clears all existing pivot columns.
    """

    def __init__(self, ncols: int, modulus: int):
        self.ncols = ncols
        self.modulus = modulus
        self.dtype = field_dtype(modulus)
        self.pivots: List[int] = []
        self.rows: List[np.ndarray] = []

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def copy(self) -> "RowSpace":
        clone = RowSpace(self.ncols, self.modulus)
        clone.pivots = list(self.pivots)
        clone.rows = [row.copy() for row in self.rows]
        return clone

    def extend(self, block) -> int:
        """Add the rows of block; return how many independent rows they contributed"""
        p = self.modulus
        block = np.array(block, dtype=self.dtype).reshape(-1, self.ncols) % p
        if block.shape[0] == 0 or self.rank == self.ncols:
            return 0

        for column, row in zip(self.pivots, self.rows):
            factors = block[:, column]
            if factors.any():
                block = (block - np.outer(factors, row)) % p

        added = 0
        while block.shape[0]:
            nonzero_rows = np.flatnonzero(block.any(axis=1))
            if nonzero_rows.size == 0:
                break
            block = block[nonzero_rows]
            row = block[0]
            column = int(np.flatnonzero(row)[0])
            inverse = pow(int(row[column]), -1, p)
            row = (row * inverse) % p
            rest = block[1:]
            factors = rest[:, column]
            if factors.any():
                rest = (rest - np.outer(factors, row)) % p
            self.pivots.append(column)
            self.rows.append(row)
            added += 1
            block = rest
            if self.rank == self.ncols:
                break
        return added


def rank_mod_p(matrix, modulus: int) -> int:
    """Exact rank of a dense matrix over GF(modulus)"""
    matrix = np.asarray(matrix)
    if matrix.ndim != 2 or matrix.shape[0] == 0 or matrix.shape[1] == 0:
        return 0
    space = RowSpace(matrix.shape[1], modulus)
    return space.extend(matrix)


def projectively_equal(p: Sequence[int], q: Sequence[int], modulus: int) -> bool:
    """p ~ q iff every 2x2 minor of the 2 x (n+1) matrix [p; q] vanishes"""
    size = len(p)
    for i in range(size):
        for j in range(i + 1, size):
            if (p[i] * q[j] - p[j] * q[i]) % modulus:
                return False
    return True


def cell_digest(*parts) -> int:
    """Stable 64-bit digest of a cell key (independent of PYTHONHASHSEED)"""
    text = "|".join(str(part) for part in parts)
    return int.from_bytes(hashlib.sha256(text.encode('utf-8')).digest()[:8], 'big')


def seeded_generator(seed: int, key: int, trial: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([seed, key, trial]))


def random_points(rng: np.random.Generator, count: int, n: int, modulus: int) -> List[Tuple[int, ...]]:
    """
    Uniform points of P^n over GF(p) with x0 != 0, rejecting projective
    repeats. x0 != 0 keeps every point off the slicing hyperplane x0 = 0.
    """
    points: List[Tuple[int, ...]] = []
    while len(points) < count:
        first = int(rng.integers(1, modulus))
        rest = [int(value) for value in rng.integers(0, modulus, size=n)]
        candidate = (first, *rest)
        if any(projectively_equal(candidate, other, modulus) for other in points):
            logger.info("resampling a repeated point")
            continue
        points.append(candidate)
    return points
