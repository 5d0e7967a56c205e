"""
Conjectural Hilbert functions: Fröberg's F', F and the Fröberg–Iarrobino
G', G for fat points, the obstruction-sum form of G and its codimension-one
recursion.

Conventions (fixed once, used everywhere):

* F truncates the Fröberg series: F(A)_m = F'(A)_m unless a coefficient
  F'(A)_{m'} with m' <= m is <= 0, in which case F(A)_m = 0. Truncation by
  the full generator set already accounts for every sub-multiset A' ⊆ A,
  since dropping generators never lowers the first non-positive degree.
* G(A)_m = C(n+m, n) - F(m+1-k_1, ..., m+1-k_d)_m, and G is the ambient
  dimension as soon as some k_i >= m+1.
* The recursion sums, for every point j+1 (prefix = the j points before it)
  and every level i = 0..k_{j+1}-1, the step
  C(n+i-1, n-1) - G(j, C_ji, n)_i with C_ji = (k_1..k_j) + (i-m), positive
  part taken, evaluated in P^{n-1}. The first point has an empty prefix and
  contributes deg {p}^k.
"""

from __future__ import annotations

import logging
from functools import lru_cache
from typing import List, Tuple

from pydantic import BaseModel

from fatpoints.services.errors import PreconditionError
from fatpoints.services.uples import Uple, binomial, shift, sub_multisets

logger = logging.getLogger(__name__)


class ConjecturalValue(BaseModel):
    value: int
    clamped: bool
    ambient_dim: int


class BalancingWitness(BaseModel):
    uple: List[int]
    balanced: List[int]
    g_uple: int
    g_balanced: int
    ordered: bool
    equality_iff_full: bool


def ambient_dim(n: int, m: int) -> int:
    """dim R_m = C(n+m, n)"""
    return binomial(n + m, n)


def scheme_degree(n: int, uple: Uple) -> int:
    """deg of a fat point scheme: sum of C(n+k-1, n) over positive k"""
    return sum(binomial(n + k - 1, n) for k in uple.positive_part())


def _check_dimension(n: int, m: int):
    if n < 1:
        raise PreconditionError(f"dimension n must be >= 1, got {n}")
    if m < 0:
        raise PreconditionError(f"degree m must be >= 0, got {m}")


def f_prime(n: int, uple: Uple, m: int) -> int:
    """F'(A)_m = sum over B ⊆ A of (-1)^#B C(n+m-|B|, n)"""
    _check_dimension(n, m)
    if any(a < 0 for a in uple):
        raise PreconditionError(f"generator degrees must be >= 0, got {uple}")
    if any(a == 0 for a in uple):
        # a unit generator: the factor (1 - t^0) kills every coefficient
        return 0
    return _f_prime_cached(n, uple.canonical(), m)


@lru_cache(maxsize=65536)
def _f_prime_cached(n: int, canonical: Uple, m: int) -> int:
    value = 0
    for part, weight in sub_multisets(canonical):
        sign = -1 if len(part) % 2 else 1
        value += sign * weight * binomial(n + m - part.size(), n)
    return value


def froberg_series(n: int, uple: Uple, m: int) -> List[int]:
    """Coefficients c_0..c_m of prod(1 - t^a) / (1 - t)^(n+1)"""
    _check_dimension(n, m)
    coefficients = [binomial(n + j, n) for j in range(m + 1)]
    for a in uple:
        if a < 0:
            raise PreconditionError(f"generator degrees must be >= 0, got {uple}")
        # descending j so coefficients[j - a] is still the old value
        for j in range(m, a - 1, -1):
            coefficients[j] -= coefficients[j - a]
    return coefficients


def f(n: int, uple: Uple, m: int) -> ConjecturalValue:
    """Truncated Fröberg value F(A)_m"""
    series = froberg_series(n, uple, m)
    raw = f_prime(n, uple, m)
    truncated = any(c <= 0 for c in series)
    value = 0 if truncated else raw
    return ConjecturalValue(value=value, clamped=truncated and raw != 0, ambient_dim=ambient_dim(n, m))


def g(n: int, uple: Uple, m: int) -> ConjecturalValue:
    """G(A)_m = dim R_m - F(m+1-k_1, ..., m+1-k_d)_m"""
    _check_dimension(n, m)
    if any(k < 1 for k in uple):
        raise PreconditionError(f"multiplicities must be >= 1, got {uple}")
    return _g_cached(n, uple.canonical(), m)


@lru_cache(maxsize=65536)
def _g_cached(n: int, canonical: Uple, m: int) -> ConjecturalValue:
    ambient = ambient_dim(n, m)
    if any(k >= m + 1 for k in canonical):
        return ConjecturalValue(value=ambient, clamped=True, ambient_dim=ambient)
    dual = Uple(tuple(m + 1 - k for k in canonical))
    froberg = f(n, dual, m)
    return ConjecturalValue(value=ambient - froberg.value, clamped=froberg.clamped, ambient_dim=ambient)


def g_value(n: int, uple: Uple, m: int) -> int:
    return g(n, uple, m).value


def g_prime(n: int, uple: Uple, m: int) -> int:
    """G'(A)_m: dual form with no truncation (may leave [0, dim R_m])"""
    _check_dimension(n, m)
    dual = Uple(tuple(max(m + 1 - k, 0) for k in uple.positive_part()))
    return ambient_dim(n, m) - f_prime(n, dual, m)


def g_obstruction_sum(n: int, uple: Uple, m: int) -> int:
    """
    sum_{t>=1} (-1)^(t-1) sum_{l(B)=t} C(n + |B| - t - (t-1)m, n), B ⊆ A.
    Only meaningful when G(A)_m is below the ambient dimension.
    """
    value = g(n, uple, m)
    if value.value >= value.ambient_dim:
        raise PreconditionError(f"G({uple})_{m} fills degree {m} in P^{n}; the obstruction sum does not apply")
    return _obstruction_sum(n, uple, m)


def _obstruction_sum(n: int, uple: Uple, m: int) -> int:
    total = 0
    for part, weight in sub_multisets(uple):
        t = len(part)
        if t == 0:
            continue
        sign = 1 if t % 2 else -1
        total += sign * weight * binomial(n + part.size() - t - (t - 1) * m, n)
    return total


def induced_uple(uple: Uple, active: int, level: int, m: int) -> Uple:
    """C_ji: the prefix before point `active` shifted by level - m, positive part"""
    return shift(uple.prefix(active), level - m).positive_part()


def _recursion_terms(n: int, uple: Uple, m: int) -> List[Tuple[int, int, Uple, ConjecturalValue]]:
    terms = []
    for active, k in enumerate(uple):
        for level in range(k):
            induced = induced_uple(uple, active, level, m)
            terms.append((active, level, induced, g(n - 1, induced, level)))
    return terms


def g_recursion(n: int, uple: Uple, m: int) -> int:
    """G(A)_m rebuilt from conjectural values of the induced schemes in P^{n-1}"""
    if n < 2:
        raise PreconditionError("the codimension-one recursion needs n >= 2")
    uple = uple.positive_part()
    top = g(n, uple, m)
    if top.value >= top.ambient_dim:
        raise PreconditionError(f"G({uple})_{m} fills degree {m} in P^{n}; the recursion does not apply")
    total = 0
    for _, level, _, value in _recursion_terms(n, uple, m):
        total += binomial(n + level - 1, n - 1) - value.value
    return total


def balancing_compare(n: int, uple: Uple, m: int) -> BalancingWitness:
    """Compare G(A) with G(B), B moving one unit from k_1 to k_2 (k_1 >= k_2 + 2)"""
    ordered = uple.sorted_desc()
    if len(ordered) < 2 or ordered[0] < ordered[1] + 2:
        raise PreconditionError(f"balancing needs k_1 >= k_2 + 2 after sorting, got {ordered}")
    balanced = ordered.with_entry(0, ordered[0] - 1).with_entry(1, ordered[1] + 1)
    g_a = g(n, ordered, m)
    g_b = g(n, balanced, m)
    equal = g_a.value == g_b.value
    full = g_b.value == g_b.ambient_dim
    return BalancingWitness(
        uple=list(ordered),
        balanced=list(balanced),
        g_uple=g_a.value,
        g_balanced=g_b.value,
        ordered=g_a.value >= g_b.value,
        equality_iff_full=equal == full,
    )


def complete_intersection_g(n: int, d: int, j: int, m: int) -> int:
    """G from the complete-intersection formula, d <= n+1 generators of degree j"""
    if d > n + 1:
        raise PreconditionError(f"complete-intersection formula needs d <= n+1, got d={d}, n={n}")
    codimension = sum((-1) ** t * binomial(d, t) * binomial(n + m - t * j, n) for t in range(d + 1))
    return ambient_dim(n, m) - codimension


def increments_by_k(n: int, uple: Uple, m: int, index: int = 0) -> List[int]:
    """G with entry `index` raised from 1 up to its value; others fixed"""
    values = []
    for k in range(1, uple[index] + 1):
        values.append(g(n, uple.with_entry(index, k), m).value)
    return values
