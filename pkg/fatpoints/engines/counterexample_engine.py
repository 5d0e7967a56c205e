"""
Counterexample arithmetic for the strong conjecture at d = n+5 homogeneous
points. Everything here is exact integer comparison; no rank is computed.

For a triple (n, k, m) and d points:
    max: G(d, k, n+1)_m < C(n+m, n)
    rn1: (n+3)k >= mn + 2
    rn2: (d-1)(2k-1-m) <= (k-1)(n-1) + 1
and m(n, k) is the largest m satisfying rn1. k(n) is the least k from which
on (n+5) C(n+k-1, n) <= C(n+m(n,k), n), which makes max automatic.
"""

import logging
from typing import Dict, List, Optional, Tuple

from pydantic import BaseModel

from fatpoints.engines.conjectural_engine import ambient_dim, g
from fatpoints.services.errors import PreconditionError
from fatpoints.services.uples import Uple, binomial

logger = logging.getLogger(__name__)

REPORTED_K: Dict[int, int] = {4: 88, 5: 88, 6: 141}
REPORTED_K_INTERVAL: Dict[int, Tuple[int, int]] = {7: (231, 648)}


class CtrFlags(BaseModel):
    max_holds: bool
    rn1: bool
    rn2: bool
    surrogate: bool

    def all(self) -> bool:
        return self.max_holds and self.rn1 and self.rn2


class KRow(BaseModel):
    k: int
    m: int
    rn2: bool
    surrogate: bool


class KDiscrepancy(BaseModel):
    reported: str
    computed: Optional[int]
    computed_rn2: Optional[int]
    smaller_k_satisfying: List[int]


class KOfReport(BaseModel):
    n: int
    k_max: int
    computed: Optional[int]
    computed_rn2: Optional[int]
    reported_value: Optional[int] = None
    reported_interval: Optional[Tuple[int, int]] = None
    agrees: Optional[bool] = None
    discrepancy: Optional[KDiscrepancy] = None
    asymptotic_margin: int
    table: List[KRow]


def m_of(n: int, k: int) -> int:
    """Largest m with mn <= (n+3)k - 2"""
    if n < 1 or k < 1:
        raise PreconditionError(f"m(n, k) needs n, k >= 1, got n={n}, k={k}")
    return ((n + 3) * k - 2) // n


def rn1(n: int, k: int, m: int) -> bool:
    return (n + 3) * k >= m * n + 2


def rn2(n: int, k: int, m: int, d: int) -> bool:
    return (d - 1) * (2 * k - 1 - m) <= (k - 1) * (n - 1) + 1


def surrogate(n: int, k: int) -> bool:
    return (n + 5) * binomial(n + k - 1, n) <= binomial(n + m_of(n, k), n)


def ctr_inequalities(n: int, k: int, m: int, d: int) -> CtrFlags:
    value = g(n, Uple((k,) * d), m)
    return CtrFlags(
        max_holds=value.value < ambient_dim(n, m),
        rn1=rn1(n, k, m),
        rn2=rn2(n, k, m, d),
        surrogate=surrogate(n, k),
    )


def asymptotic_margin(n: int) -> int:
    """(n+3)^n - (n+5) n^n: positive iff the surrogate holds for all large k"""
    return (n + 3) ** n - (n + 5) * n ** n


def _least_tail_start(rows: List[KRow]) -> Optional[int]:
    start = None
    for row in reversed(rows):
        if not row.surrogate:
            break
        start = row.k
    return start


def k_of(n: int, k_max: int) -> KOfReport:
    """
    k0 such that the surrogate holds on every k in [k0, k_max]. `computed`
    scans every k; `computed_rn2` only the k where rn2 holds at d = n+5.
    """
    if k_max < 1:
        raise PreconditionError(f"k_max must be >= 1, got {k_max}")
    d = n + 5
    table = []
    for k in range(1, k_max + 1):
        m = m_of(n, k)
        table.append(KRow(k=k, m=m, rn2=rn2(n, k, m, d), surrogate=surrogate(n, k)))
    computed = _least_tail_start(table)
    computed_rn2 = _least_tail_start([row for row in table if row.rn2])

    report = KOfReport(
        n=n, k_max=k_max, computed=computed, computed_rn2=computed_rn2,
        asymptotic_margin=asymptotic_margin(n), table=table,
    )
    if n in REPORTED_K:
        reported = REPORTED_K[n]
        report.reported_value = reported
        report.agrees = reported in (computed, computed_rn2)
        description = f"k({n}) = {reported}"
    elif n in REPORTED_K_INTERVAL:
        low, high = REPORTED_K_INTERVAL[n]
        report.reported_interval = (low, high)
        report.agrees = computed is not None and low <= computed <= high
        description = f"{low} <= k({n}) <= {high}"
    else:
        return report

    if not report.agrees:
        bound = report.reported_value or report.reported_interval[0]
        report.discrepancy = KDiscrepancy(
            reported=description,
            computed=computed,
            computed_rn2=computed_rn2,
            smaller_k_satisfying=[row.k for row in table if row.k < bound and row.surrogate][-10:],
        )
        logger.warning("k(%d): reported %s, computed %s (rn2 cells: %s)", n, description, computed, computed_rn2)
    if report.asymptotic_margin <= 0:
        logger.warning("surrogate does not dominate asymptotically for n=%d (margin %d)", n, report.asymptotic_margin)
    return report
