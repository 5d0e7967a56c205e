"""
Rank oracle for Hilbert functions of fat point configurations.

A degree-m form vanishes to order k at p iff all its partial derivatives of
order k-1 vanish at p (Euler's relation makes the lower orders redundant when
the characteristic exceeds m). Each such condition is one row over the
monomial basis of R_m; the Hilbert function in degree m is the rank of the
stacked rows. When k-1 > m the order-m rows already span the whole dual of
R_m, so the order is capped at m.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import List, Literal, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel
from sympy import isprime

from fatpoints.engines.conjectural_engine import ambient_dim
from fatpoints.services.errors import CoincidentPointsError, ModulusError, PreconditionError
from fatpoints.services.field_algebra import (
    RowSpace,
    cell_digest,
    enumerate_monomials,
    field_dtype,
    monomial_index,
    projectively_equal,
    random_points,
    seeded_generator,
)
from fatpoints.services.settings import Settings
from fatpoints.services.uples import Uple, binomial

logger = logging.getLogger(__name__)

Point = Tuple[int, ...]


@dataclass(frozen=True)
class FatPointConfig:
    n: int
    points: Tuple[Point, ...]
    mults: Uple

    def __post_init__(self):
        object.__setattr__(self, 'points', tuple(tuple(int(c) for c in p) for p in self.points))
        if not isinstance(self.mults, Uple):
            object.__setattr__(self, 'mults', Uple(tuple(self.mults)))
        if len(self.points) != len(self.mults):
            raise PreconditionError(f"{len(self.points)} points but {len(self.mults)} multiplicities")
        for point in self.points:
            if len(point) != self.n + 1:
                raise PreconditionError(f"point {point} does not have {self.n + 1} coordinates")
            if not any(point):
                raise PreconditionError("the zero vector is not a projective point")
        if any(k < 0 for k in self.mults):
            raise PreconditionError(f"multiplicities must be >= 0, got {self.mults}")

    def degree(self) -> int:
        return sum(binomial(self.n + k - 1, self.n) for k in self.mults.positive_part())

    def with_mult(self, index: int, k: int) -> "FatPointConfig":
        return FatPointConfig(self.n, self.points, self.mults.with_entry(index, k))

    def prefix(self, count: int) -> "FatPointConfig":
        return FatPointConfig(self.n, self.points[:count], self.mults.prefix(count))

    def decremented(self, r: int = 1) -> "FatPointConfig":
        """Same points, every multiplicity lowered by r; points reaching 0 are dropped"""
        kept = [(p, k - r) for p, k in zip(self.points, self.mults) if k - r > 0]
        return FatPointConfig(self.n, tuple(p for p, _ in kept), Uple(tuple(k for _, k in kept)))


@dataclass(frozen=True)
class PowerIdealConfig:
    n: int
    linear_forms: Tuple[Point, ...]
    powers: Uple

    def __post_init__(self):
        object.__setattr__(self, 'linear_forms', tuple(tuple(int(c) for c in f) for f in self.linear_forms))
        if not isinstance(self.powers, Uple):
            object.__setattr__(self, 'powers', Uple(tuple(self.powers)))
        if len(self.linear_forms) != len(self.powers):
            raise PreconditionError(f"{len(self.linear_forms)} forms but {len(self.powers)} powers")
        if any(a < 0 for a in self.powers):
            raise PreconditionError(f"powers must be >= 0, got {self.powers}")


class HilbertValue(BaseModel):
    value: int
    method: Literal['rank-oracle', 'formula', 'bound']
    modulus: int
    seed: Optional[int] = None
    trials: int = 1
    single_trial: bool = True


class ConfigRecord(BaseModel):
    n: int
    points: List[List[int]]
    mults: List[int]

    @classmethod
    def from_config(cls, config: FatPointConfig) -> "ConfigRecord":
        return cls(n=config.n, points=[list(p) for p in config.points], mults=list(config.mults))

    def to_config(self) -> FatPointConfig:
        return FatPointConfig(self.n, tuple(tuple(p) for p in self.points), Uple(tuple(self.mults)))


@lru_cache(maxsize=64)
def _checked_prime(modulus: int) -> bool:
    return isprime(modulus)


def check_modulus(modulus: int, m: int, mults: Sequence[int] = ()):
    if not _checked_prime(modulus):
        raise ModulusError(f"modulus {modulus} is not prime")
    top = max([m, *mults])
    if modulus <= top:
        raise ModulusError(f"modulus {modulus} must exceed max(m, k_i) = {top}")


@lru_cache(maxsize=None)
def _exponent_matrix(n: int, m: int) -> np.ndarray:
    return np.array(enumerate_monomials(n, m), dtype=np.int64).reshape(-1, n + 1)


def _falling_factorials(m: int, modulus: int) -> np.ndarray:
    """table[b, a] = b! / (b-a)! mod p, zero when a > b"""
    table = np.zeros((m + 1, m + 1), dtype=field_dtype(modulus))
    for b in range(m + 1):
        value = 1
        for a in range(b + 1):
            table[b, a] = value
            value = (value * (b - a)) % modulus
    return table


def _power_table(point: Point, m: int, modulus: int) -> np.ndarray:
    table = np.ones((len(point), m + 1), dtype=field_dtype(modulus))
    for i, coordinate in enumerate(point):
        for e in range(1, m + 1):
            table[i, e] = (int(table[i, e - 1]) * coordinate) % modulus
    return table


def derivative_rows(point: Sequence[int], k: int, m: int, modulus: int) -> np.ndarray:
    """
    Rows of the order-min(k-1, m) partial derivatives at `point`, over the
    degree-m monomials. Entry at x^beta for d^alpha is
    beta!/(beta-alpha)! * point^(beta-alpha), zero unless beta >= alpha.
    """
    if modulus <= m:
        raise ModulusError(f"modulus {modulus} must exceed the degree {m}")
    point = tuple(int(c) % modulus for c in point)
    n = len(point) - 1
    columns = _exponent_matrix(n, m)
    if k <= 0:
        return np.zeros((0, columns.shape[0]), dtype=field_dtype(modulus))
    order = min(k - 1, m)
    falling = _falling_factorials(m, modulus)
    powers = _power_table(point, m, modulus)
    rows = []
    for alpha in enumerate_monomials(n, order):
        difference = columns - np.array(alpha, dtype=np.int64)
        inside = (difference >= 0).all(axis=1)
        clipped = np.clip(difference, 0, m)
        row = np.ones(columns.shape[0], dtype=field_dtype(modulus))
        for i in range(n + 1):
            row = (row * falling[columns[:, i], alpha[i]]) % modulus
            row = (row * powers[i, clipped[:, i]]) % modulus
        row[~inside] = 0
        rows.append(row)
    return np.array(rows, dtype=field_dtype(modulus)).reshape(-1, columns.shape[0])


def check_distinct(points: Sequence[Point], modulus: int):
    for i, p in enumerate(points):
        if not any(c % modulus for c in p):
            raise PreconditionError(f"point {p} vanishes modulo {modulus}")
        for q in points[:i]:
            if projectively_equal(p, q, modulus):
                raise CoincidentPointsError(f"points {q} and {p} coincide in P^{len(p) - 1}")


def condition_space(config: FatPointConfig, m: int, modulus: int) -> RowSpace:
    """Row space of all vanishing conditions imposed by config in degree m"""
    check_modulus(modulus, m)
    check_distinct(config.points, modulus)
    space = RowSpace(ambient_dim(config.n, m), modulus)
    blocks = [derivative_rows(point, k, m, modulus) for point, k in zip(config.points, config.mults) if k > 0]
    if blocks:
        space.extend(np.vstack(blocks))
    return space


def hpts_rank(config: FatPointConfig, m: int, modulus: int) -> HilbertValue:
    """h(Z, m) for the explicit configuration Z = config"""
    check_modulus(modulus, m, config.mults.positive_part().entries)
    rank = condition_space(config, m, modulus).rank
    return HilbertValue(value=rank, method='rank-oracle', modulus=modulus, trials=1, single_trial=True)


def hilbert_rank(config: FatPointConfig, m: int, modulus: int) -> int:
    """Bare rank, no multiplicity/modulus bookkeeping beyond m (used for induced schemes)"""
    if not config.points:
        return 0
    return condition_space(config, m, modulus).rank


def hpowlin_dim(config: PowerIdealConfig, m: int, modulus: int) -> int:
    """HPOWLIN = dim R_m - dim J_m, J generated by l_i^{a_i}"""
    check_modulus(modulus, m)
    n = config.n
    total = ambient_dim(n, m)
    if any(a == 0 for a in config.powers):
        return 0
    index = monomial_index(n, m)
    space = RowSpace(total, modulus)
    dtype = field_dtype(modulus)
    for form, a in zip(config.linear_forms, config.powers):
        if a > m:
            continue
        form = tuple(int(c) % modulus for c in form)
        expansion = []
        for delta in enumerate_monomials(n, a):
            coefficient = math.factorial(a)
            for i, e in enumerate(delta):
                coefficient //= math.factorial(e)
            coefficient %= modulus
            for coordinate, e in zip(form, delta):
                coefficient = (coefficient * pow(coordinate, e, modulus)) % modulus
            if coefficient:
                expansion.append((delta, coefficient))
        rows = []
        for gamma in enumerate_monomials(n, m - a):
            row = np.zeros(total, dtype=dtype)
            for delta, coefficient in expansion:
                row[index[tuple(x + y for x, y in zip(delta, gamma))]] = coefficient
            rows.append(row)
        if rows:
            space.extend(np.array(rows, dtype=dtype))
        if space.rank == total:
            break
    return total - space.rank


class InterpolationEngine:
    """Generic (random-point) evaluation of HPTS with seeding, trials and an optional cache"""

    def __init__(self, settings: Optional[Settings] = None, cache=None):
        self.settings = settings or Settings.from_env()
        self.cache = cache
        logger.info("interpolation engine: modulus %d, %d trial(s), cache %s",
                    self.settings.prime, self.settings.trials, 'on' if cache else 'off')

    def _resolve(self, modulus, seed, trials):
        return (
            self.settings.prime if modulus is None else modulus,
            self.settings.seed if seed is None else seed,
            self.settings.trials if trials is None else trials,
        )

    def generic_config(self, n: int, uple: Uple, seed: int, trial: int = 0,
                       modulus: Optional[int] = None) -> FatPointConfig:
        """Seeded random configuration; the cell key ignores the order of A"""
        modulus = self.settings.prime if modulus is None else modulus
        canonical = uple.canonical()
        rng = seeded_generator(seed, cell_digest(n, canonical), trial)
        points = random_points(rng, len(canonical), n, modulus)
        return FatPointConfig(n, tuple(points), canonical)

    def trial_ranks(self, n: int, uple: Uple, m: int, modulus: Optional[int] = None,
                    seed: Optional[int] = None, trials: Optional[int] = None) -> List[int]:
        modulus, seed, trials = self._resolve(modulus, seed, trials)
        check_modulus(modulus, m, uple.positive_part().entries)
        return [
            hpts_rank(self.generic_config(n, uple, seed, trial, modulus), m, modulus).value
            for trial in range(trials)
        ]

    def generic_hpts(self, n: int, uple: Uple, m: int, modulus: Optional[int] = None,
                     seed: Optional[int] = None, trials: Optional[int] = None) -> HilbertValue:
        """
        Max rank over seeded random configurations. Rank only drops under
        specialization, so every trial is a lower bound on the generic value.
        """
        if trials is not None and trials < 1:
            raise PreconditionError("trials must be >= 1")
        modulus, seed, trials = self._resolve(modulus, seed, trials)
        canonical = uple.canonical()
        key = (n, canonical.entries, m, modulus, seed, trials)
        if self.cache is not None:
            cached = self.cache.get(key)
            if cached is not None:
                logger.info("cache hit for n=%d A=%s m=%d", n, canonical, m)
                return cached
        ranks = self.trial_ranks(n, canonical, m, modulus, seed, trials)
        if len(set(ranks)) > 1:
            logger.warning("unstable genericity for n=%d A=%s m=%d: trial ranks %s", n, canonical, m, ranks)
        value = HilbertValue(value=max(ranks), method='rank-oracle', modulus=modulus,
                             seed=seed, trials=trials, single_trial=trials == 1)
        if self.cache is not None:
            self.cache.put(key, value)
        return value

    def seed_agreement(self, n: int, uple: Uple, m: int, seeds: Sequence[int],
                       modulus: Optional[int] = None) -> float:
        """Fraction of seeds whose single-trial rank reaches the max over all seeds"""
        ranks = [self.trial_ranks(n, uple, m, modulus, seed, 1)[0] for seed in seeds]
        if not ranks:
            return 1.0
        best = max(ranks)
        if len(set(ranks)) > 1:
            logger.warning("seeds disagree for n=%d A=%s m=%d: %s", n, uple, m, ranks)
        return sum(1 for r in ranks if r == best) / len(ranks)

    def is_generic_stable(self, n: int, uple: Uple, m: int, seeds: Sequence[int],
                          modulus: Optional[int] = None) -> bool:
        return self.seed_agreement(n, uple, m, seeds, modulus) == 1.0

    def duality_residual(self, n: int, uple: Uple, m: int, modulus: Optional[int] = None,
                         seed: Optional[int] = None) -> int:
        """hpts - (dim R_m - hpowlin) on one seeded point set read both ways; 0 expected"""
        modulus, seed, _ = self._resolve(modulus, seed, 1)
        if any(k < 1 or k > m for k in uple):
            raise PreconditionError(f"duality needs 1 <= k_i <= m, got A={uple}, m={m}")
        check_modulus(modulus, m, uple.entries)
        config = self.generic_config(n, uple, seed, 0, modulus)
        points_side = hpts_rank(config, m, modulus).value
        forms = PowerIdealConfig(n, config.points, Uple(tuple(m + 1 - k for k in config.mults)))
        forms_side = ambient_dim(n, m) - hpowlin_dim(forms, m, modulus)
        return points_side - forms_side
