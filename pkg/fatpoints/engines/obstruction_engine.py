"""
Codimension-one upper bound for fat point Hilbert functions.

Points are added one at a time and each point's multiplicity is raised one
level at a time. Raising the active point p from p^(k-1) to p^k adds at most
C(n+k-2, n-1) - h(W, k-1) new conditions in degree m, where W lives on the
slicing hyperplane x0 = 0: every earlier point q_r with k_r + (k-1) - m > 0
contributes the point where line(p, q_r) meets x0 = 0, with that
multiplicity. Summing over all steps gives

    h(Z, m) <= deg Z - sum h(W, level - 1)

with equality exactly when Z has only the expected linear obstructions.
"""

from __future__ import annotations

import logging
from typing import List, Optional, Sequence

from pydantic import BaseModel

from fatpoints.engines.conjectural_engine import ambient_dim, g_value
from fatpoints.engines.interpolation_engine import (
    ConfigRecord,
    FatPointConfig,
    HilbertValue,
    InterpolationEngine,
    Point,
    check_distinct,
    check_modulus,
    derivative_rows,
    hilbert_rank,
)
from fatpoints.services.errors import (
    BoundViolationError,
    DegenerateInductionError,
    HyperplanePointError,
    PreconditionError,
)
from fatpoints.services.field_algebra import RowSpace, projectively_equal
from fatpoints.services.settings import DEFAULT_PRIME, Settings
from fatpoints.services.uples import Uple, binomial

logger = logging.getLogger(__name__)


class ObstructionStep(BaseModel):
    n: int
    active_point_index: int
    level: int
    induced_config: ConfigRecord
    induced_h: HilbertValue
    step_bound: int
    realized_increment: int

    def obstruction_degree(self) -> int:
        """deg of the expected obstruction scheme: deg p^(level-1) + h(W, level-1)"""
        return binomial(self.n + self.level - 2, self.n) + self.induced_h.value


class UbdaReport(BaseModel):
    config: ConfigRecord
    m: int
    direct_h: HilbertValue
    bound: int
    steps: List[ObstructionStep]
    only_linear: bool
    induced_match_g: bool
    aborts: int = 0


class DecrementChain(BaseModel):
    maximal: bool
    levels: List[List[int]]
    holds: bool


def telescoped_degree(n: int, k: int) -> int:
    """sum_{i<k} C(n+i-1, n-1); equals C(n+k-1, n) = deg {p}^k"""
    return sum(binomial(n + i - 1, n - 1) for i in range(k))


def hyperplane_meet(p: Sequence[int], q: Sequence[int], modulus: int = DEFAULT_PRIME) -> Point:
    """line(p, q) ∩ {x0 = 0} as q0*p - p0*q, in the hyperplane's coordinates x1..xn"""
    if p[0] % modulus == 0 or q[0] % modulus == 0:
        raise HyperplanePointError(f"slicing needs x0 != 0, got {tuple(p)} and {tuple(q)}")
    if projectively_equal(p, q, modulus):
        raise PreconditionError(f"points {tuple(p)} and {tuple(q)} coincide; no line through them")
    return tuple((q[0] * a - p[0] * b) % modulus for a, b in zip(p[1:], q[1:]))


def _induced(priors: Sequence[Point], prior_mults: Sequence[int], active: Point,
             level: int, m: int, modulus: int) -> FatPointConfig:
    n = len(active) - 1
    points, mults = [], []
    for q, k in zip(priors, prior_mults):
        multiplicity = k + level - m
        if multiplicity <= 0:
            continue
        meet = hyperplane_meet(active, q, modulus)
        for other in points:
            if projectively_equal(meet, other, modulus):
                raise DegenerateInductionError(
                    f"induced points coincide: {active} is collinear with two earlier points"
                )
        points.append(meet)
        mults.append(multiplicity)
    return FatPointConfig(n - 1, tuple(points), Uple(tuple(mults)))


def induced_w_config(config: FatPointConfig, active_index: int, level: int, m: int,
                     modulus: int = DEFAULT_PRIME) -> FatPointConfig:
    """W for point `active_index` (0-based) at `level` i: earlier points only"""
    if config.n < 2:
        raise PreconditionError("the induced configuration needs n >= 2")
    if not 0 <= level < config.mults[active_index]:
        raise PreconditionError(f"level {level} outside 0..{config.mults[active_index] - 1}")
    for point in config.points:
        if point[0] % modulus == 0:
            raise HyperplanePointError(f"point {point} lies on the slicing hyperplane x0 = 0")
    return _induced(config.points[:active_index], config.mults.entries[:active_index],
                    config.points[active_index], level, m, modulus)


def _induced_value(induced: FatPointConfig, degree: int, modulus: int) -> HilbertValue:
    return HilbertValue(value=hilbert_rank(induced, degree, modulus), method='rank-oracle',
                        modulus=modulus, trials=1, single_trial=True)


def key_step_bound(config_so_far: FatPointConfig, new_point: Sequence[int], k: int, m: int,
                   modulus: int = DEFAULT_PRIME) -> ObstructionStep:
    """Raise new_point from multiplicity k-1 to k on top of config_so_far"""
    if k < 1:
        raise PreconditionError(f"step multiplicity must be >= 1, got {k}")
    n = config_so_far.n
    if n < 2:
        raise PreconditionError("the key step needs n >= 2")
    new_point = tuple(int(c) for c in new_point)
    check_modulus(modulus, m, (*config_so_far.mults.positive_part(), k))
    for point in (*config_so_far.points, new_point):
        if point[0] % modulus == 0:
            raise HyperplanePointError(f"point {point} lies on the slicing hyperplane x0 = 0")

    induced = _induced(config_so_far.points, config_so_far.mults.entries, new_point, k - 1, m, modulus)
    induced_h = _induced_value(induced, k - 1, modulus)
    step_bound = binomial(n + k - 2, n - 1) - induced_h.value

    points = (*config_so_far.points, new_point)
    upper = FatPointConfig(n, points, Uple((*config_so_far.mults, k)))
    lower = FatPointConfig(n, points, Uple((*config_so_far.mults, k - 1)))
    realized = hilbert_rank(upper, m, modulus) - hilbert_rank(lower, m, modulus)
    if realized > step_bound:
        raise BoundViolationError(
            f"increment {realized} exceeds the step bound {step_bound} (k={k}, m={m}, n={n})"
        )
    return ObstructionStep(
        n=n,
        active_point_index=len(config_so_far.points),
        level=k,
        induced_config=ConfigRecord.from_config(induced),
        induced_h=induced_h,
        step_bound=step_bound,
        realized_increment=realized,
    )


def ubda_bound(config: FatPointConfig, m: int, modulus: int = DEFAULT_PRIME) -> UbdaReport:
    """
    Every step, point by point and level by level. The direct value comes
    from the same incremental row space, so each realized increment is the
    rank gained by the new derivative rows.
    """
    n = config.n
    if n < 2:
        raise PreconditionError("the codimension-one bound needs n >= 2")
    if any(k < 1 for k in config.mults):
        raise PreconditionError(f"multiplicities must be >= 1, got {config.mults}")
    check_modulus(modulus, m, config.mults.entries)
    check_distinct(config.points, modulus)

    space = RowSpace(ambient_dim(n, m), modulus)
    steps: List[ObstructionStep] = []
    induced_match_g = True
    for j, (point, k) in enumerate(zip(config.points, config.mults)):
        for i in range(k):
            induced = induced_w_config(config, j, i, m, modulus)
            induced_h = _induced_value(induced, i, modulus)
            if len(induced.mults) and induced_h.value != g_value(n - 1, induced.mults, i):
                induced_match_g = False
            step_bound = binomial(n + i - 1, n - 1) - induced_h.value
            realized = space.extend(derivative_rows(point, i + 1, m, modulus))
            if realized > step_bound:
                raise BoundViolationError(
                    f"point {j}, level {i + 1}: increment {realized} exceeds the step bound {step_bound}"
                )
            steps.append(ObstructionStep(
                n=n,
                active_point_index=j,
                level=i + 1,
                induced_config=ConfigRecord.from_config(induced),
                induced_h=induced_h,
                step_bound=step_bound,
                realized_increment=realized,
            ))

    bound = config.degree() - sum(step.induced_h.value for step in steps)
    direct = HilbertValue(value=space.rank, method='rank-oracle', modulus=modulus)
    logger.info("ubda n=%d A=%s m=%d: bound %d, direct %d", n, config.mults, m, bound, direct.value)
    return UbdaReport(
        config=ConfigRecord.from_config(config),
        m=m,
        direct_h=direct,
        bound=bound,
        steps=steps,
        only_linear=direct.value == bound,
        induced_match_g=induced_match_g,
    )


def generic_ubda(n: int, uple: Uple, m: int, modulus: Optional[int] = None, seed: Optional[int] = None,
                 settings: Optional[Settings] = None) -> UbdaReport:
    """ubda on seeded random points, reseeding (seed, seed+1, ...) past degenerate inductions"""
    settings = settings or Settings.from_env()
    modulus = settings.prime if modulus is None else modulus
    seed = settings.seed if seed is None else seed
    engine = InterpolationEngine(settings)
    ordered = uple.positive_part()
    aborts = 0
    for attempt in range(settings.max_resamples):
        generic = engine.generic_config(n, ordered, seed + attempt, 0, modulus)
        config = FatPointConfig(n, generic.points, ordered)
        try:
            report = ubda_bound(config, m, modulus)
        except DegenerateInductionError as e:
            aborts += 1
            logger.info("resampling ubda instance (attempt %d): %s", attempt + 1, e)
            continue
        return report.model_copy(update={'aborts': aborts})
    raise DegenerateInductionError(f"every one of {settings.max_resamples} samples degenerated")


def lconj2_check(config: FatPointConfig, m: int, modulus: int = DEFAULT_PRIME) -> bool:
    """h(Z, m) <= deg Z - alpha, alpha = deg Z' - h(Z', m-1) for Z' = Z with every k lowered by 1"""
    if m < 1:
        raise PreconditionError(f"degree must be >= 1, got {m}")
    if any(k < 1 for k in config.mults):
        raise PreconditionError(f"multiplicities must be >= 1, got {config.mults}")
    decremented = config.decremented(1)
    alpha = decremented.degree() - hilbert_rank(decremented, m - 1, modulus)
    value = hilbert_rank(config, m, modulus)
    holds = value <= config.degree() - alpha
    if not holds:
        logger.warning("decrement inequality fails for A=%s m=%d: h=%d, deg=%d, alpha=%d",
                       config.mults, m, value, config.degree(), alpha)
    return holds


def lconj2_chain(config: FatPointConfig, m: int, modulus: int = DEFAULT_PRIME) -> DecrementChain:
    """
    When h(Z, m) = deg Z, every Z^(-r) at degree m-r must also reach its
    degree. levels lists [r, h(Z^(-r), m-r), deg Z^(-r)].
    """
    maximal = hilbert_rank(config, m, modulus) == config.degree()
    levels: List[List[int]] = []
    holds = True
    r = 1
    current = config.decremented(1)
    while maximal and current.points and m - r >= 0:
        value = hilbert_rank(current, m - r, modulus)
        levels.append([r, value, current.degree()])
        holds = holds and value == current.degree()
        r += 1
        current = current.decremented(1)
    return DecrementChain(maximal=maximal, levels=levels, holds=holds)
