"""
Sweeps over (n, d, A, m) comparing the rank oracle with G.
"""

from __future__ import annotations

import csv
import itertools
import logging
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Iterator, List, Literal, Optional, Tuple

from pydantic import BaseModel, Field, model_validator

from fatpoints.engines.conjectural_engine import ambient_dim, g
from fatpoints.engines.counterexample_engine import ctr_inequalities, m_of
from fatpoints.engines.interpolation_engine import HilbertValue, InterpolationEngine
from fatpoints.services.errors import CapExceededError, PreconditionError
from fatpoints.services.settings import Settings
from fatpoints.services.uples import Uple, binomial

logger = logging.getLogger(__name__)

Relation = Literal['equal', 'hpts_less', 'VIOLATION_hpts_greater']

CSV_COLUMNS = ['n', 'd', 'A', 'm', 'hpts', 'g', 'relation', 'exception_class', 'predicates', 'seed', 'modulus']

Cell = Tuple[int, Uple, int]


class GridSpec(BaseModel):
    n_values: List[int]
    d_min: int = Field(default=1, ge=1)
    d_max: int = Field(ge=1)
    k_min: int = Field(default=1, ge=1)
    k_max: int = Field(ge=1)
    m_min: int = Field(default=0, ge=0)
    m_max: int = Field(ge=0)
    homogeneous: bool = False

    @model_validator(mode='after')
    def _ranges(self):
        if not self.n_values or min(self.n_values) < 1:
            raise ValueError("n values must be >= 1")
        for low, high, name in ((self.d_min, self.d_max, 'd'), (self.k_min, self.k_max, 'k'),
                                (self.m_min, self.m_max, 'm')):
            if low > high:
                raise ValueError(f"empty {name} range {low}..{high}")
        return self

    def check_cap(self, cap: int):
        for n in self.n_values:
            columns = ambient_dim(n, self.m_max)
            if columns > cap:
                raise CapExceededError(f"C({n}+{self.m_max}, {n}) = {columns} exceeds the cap {cap}")

    def uples(self, d: int) -> Iterator[Uple]:
        if self.homogeneous:
            for k in range(self.k_min, self.k_max + 1):
                yield Uple((k,) * d)
            return
        for combo in itertools.combinations_with_replacement(range(self.k_max, self.k_min - 1, -1), d):
            yield Uple(combo)

    def cells(self) -> List[Cell]:
        return [
            (n, uple, m)
            for n in self.n_values
            for d in range(self.d_min, self.d_max + 1)
            for uple in self.uples(d)
            for m in range(self.m_min, self.m_max + 1)
        ]


class ScanRecord(BaseModel):
    n: int
    d: int
    A: List[int]
    m: int
    hpts: HilbertValue
    g_value: int
    relation: Relation
    exception_class: str
    predicates: List[str]
    degree_bound: Optional[int] = None
    bound_exceeded: bool = False

    def csv_row(self) -> List[str]:
        return [
            str(self.n), str(self.d), ",".join(str(k) for k in self.A), str(self.m),
            str(self.hpts.value), str(self.g_value), self.relation, self.exception_class,
            ";".join(self.predicates), str(self.hpts.seed), str(self.hpts.modulus),
        ]


class ScanSummary(BaseModel):
    cells: int
    equal: int
    hpts_less: int
    violations: List[ScanRecord]
    bound_exceeded: List[ScanRecord] = []


class StrongScanSummary(BaseModel):
    cells: int
    equal_outside_exceptions: int
    counterexample_candidates: List[ScanRecord]
    exceptional_equalities: List[ScanRecord]
    exceptional_strict: List[ScanRecord]
    bound_exceeded: List[ScanRecord] = []


# exception list of the strong conjecture

def exception_class(n: int, uple: Uple, m: int) -> str:
    """First matching class; the m = 2k classes need a homogeneous uple"""
    canonical = uple.canonical()
    d = len(canonical)
    k = canonical[0] if d and canonical.is_homogeneous() else None
    if d == n + 3:
        return 'd=n+3'
    if d == n + 4:
        return 'd=n+4'
    if n == 2 and d in (7, 8):
        return 'n2_d7or8'
    if k is not None and m == 2 * k:
        if n == 3 and d == 9:
            return 'n3_d9_m2k'
        if n == 4 and d == 14 and k in (2, 3):
            return 'n4_d14_m2k_k2or3'
    return 'none'


def d_n_plus_5(n: int, uple: Uple) -> bool:
    """Alternate reading of the exception list ('d = n+3 or n+5')"""
    return uple.length() == n + 5


# sufficient conditions

def rnc_predicate(n: int, uple: Uple, m: int) -> bool:
    return uple.size() <= m * n + 1 or uple.length() <= n + 1


def plus1_predicate(n: int, d: int, k: int) -> bool:
    """d <= max(n+1, (n+3)(n+2) / 2(k^2-1)), cross-multiplied"""
    if k <= 1:
        raise PreconditionError(f"plus1 needs k >= 2, got {k}")
    return d <= n + 1 or 2 * d * (k * k - 1) <= (n + 3) * (n + 2)


def nplus3_predicate(n: int, uple: Uple, m: int) -> bool:
    if uple.length() != n + 3:
        raise PreconditionError(f"needs exactly n+3 = {n + 3} points, got {uple.length()}")
    return uple.size() <= m * n + 1


def first_order_predicate(uple: Uple, m: int) -> bool:
    ordered = uple.canonical()
    return len(ordered) < 2 or m >= ordered[0] + ordered[1] - 3


def small_multiplicity_predicate(uple: Uple) -> bool:
    return max(uple.canonical(), default=0) <= 4


def half_degree_predicate(uple: Uple, m: int) -> bool:
    ordered = uple.canonical()
    if len(ordered) < 2:
        return True
    return 2 * m >= ordered[0] + 2 * ordered[1] - 2


def nohyp_predicate(uple: Uple, m: int) -> bool:
    ascending = tuple(reversed(uple.canonical().entries))
    if len(ascending) < 2:
        return True
    return 2 * ascending[-2] + ascending[-1] <= 2 * m + 2


def double_degree_bound(n: int, d: int, k: int) -> int:
    """Upper bound on h for d generic k-fold points in degree 2k-2"""
    return d * binomial(n + k - 1, n) - binomial(d, 2)


def double_degree_minus_one_bound(n: int, d: int, k: int) -> int:
    """Upper bound on h for d generic k-fold points in degree 2k-3"""
    if k < 4:
        raise PreconditionError(f"the degree 2k-3 bound needs k >= 4, got {k}")
    return d * binomial(n + k - 1, n) - (n + 1) * binomial(d, 2)


def degree_bound(n: int, uple: Uple, m: int) -> Optional[Tuple[str, int]]:
    """
    The line-obstruction bound for homogeneous cells at m = 2k-2 or m = 2k-3
    (k >= 4), when G is below the ambient dimension.
    """
    canonical = uple.canonical()
    d = len(canonical)
    if not d or not canonical.is_homogeneous():
        return None
    k = canonical[0]
    value = g(n, canonical, m)
    if value.value >= value.ambient_dim:
        return None
    if k >= 2 and m == 2 * k - 2:
        return "double_degree", double_degree_bound(n, d, k)
    if k >= 4 and m == 2 * k - 3:
        return "double_degree_minus_one", double_degree_minus_one_bound(n, d, k)
    return None


def cell_predicates(n: int, uple: Uple, m: int) -> List[str]:
    canonical = uple.canonical()
    d = len(canonical)
    names = []
    if rnc_predicate(n, canonical, m):
        names.append('rnc')
    homogeneous = d > 0 and canonical.is_homogeneous()
    if homogeneous:
        k = canonical[0]
        if k >= 2 and m == k + 1 and plus1_predicate(n, d, k):
            names.append('plus1')
    if d == n + 3 and nplus3_predicate(n, canonical, m):
        names.append('nplus3')
    if homogeneous and d == n + 5 and m == m_of(n, canonical[0]):
        flags = ctr_inequalities(n, canonical[0], m, d)
        if flags.max_holds and flags.rn1 and flags.rn2:
            names.append('ctr_candidate')
    if first_order_predicate(canonical, m):
        names.append('first_order')
    if small_multiplicity_predicate(canonical):
        names.append('small_mult')
    if half_degree_predicate(canonical, m):
        names.append('half_degree')
    if nohyp_predicate(canonical, m):
        names.append('nohyp')
    if d_n_plus_5(n, canonical):
        names.append('d_n_plus_5')
    bound = degree_bound(n, canonical, m)
    if bound is not None:
        names.append(bound[0])
    return names


def relation_of(hpts: int, g_val: int) -> Relation:
    if hpts == g_val:
        return 'equal'
    if hpts < g_val:
        return 'hpts_less'
    return 'VIOLATION_hpts_greater'


class ScanEngine:
    def __init__(self, settings: Optional[Settings] = None, cache=None):
        self.settings = settings or Settings.from_env()
        self.interpolation = InterpolationEngine(self.settings, cache)

    def evaluate(self, cell: Cell, modulus: int, seed: int, trials: int) -> ScanRecord:
        n, uple, m = cell
        hpts = self.interpolation.generic_hpts(n, uple, m, modulus, seed, trials)
        g_val = g(n, uple, m).value
        relation = relation_of(hpts.value, g_val)
        bound = degree_bound(n, uple, m)
        record = ScanRecord(
            n=n, d=len(uple), A=list(uple), m=m, hpts=hpts, g_value=g_val, relation=relation,
            exception_class=exception_class(n, uple, m), predicates=cell_predicates(n, uple, m),
            degree_bound=bound[1] if bound else None,
            bound_exceeded=bound is not None and hpts.value > bound[1],
        )
        if relation == 'VIOLATION_hpts_greater':
            logger.warning("VIOLATION n=%d A=%s m=%d: hpts %d > g %d", n, uple, m, hpts.value, g_val)
        if record.bound_exceeded:
            logger.warning("%s bound exceeded n=%d A=%s m=%d: hpts %d > %d", bound[0], n, uple, m, hpts.value, bound[1])
        return record

    def _run(self, grid: GridSpec, modulus: Optional[int], seed: Optional[int],
             trials: Optional[int]) -> List[ScanRecord]:
        modulus = self.settings.prime if modulus is None else modulus
        seed = self.settings.seed if seed is None else seed
        trials = self.settings.trials if trials is None else trials
        grid.check_cap(self.settings.cap)
        cells = grid.cells()
        logger.info("scanning %d cells with %d worker(s)", len(cells), self.settings.workers)
        with ThreadPoolExecutor(max_workers=self.settings.workers) as pool:
            records = list(pool.map(lambda cell: self.evaluate(cell, modulus, seed, trials), cells))
        records.sort(key=lambda r: (r.n, r.d, [-k for k in r.A], r.m))
        return records

    def weak_scan(self, grid: GridSpec, modulus: Optional[int] = None, seed: Optional[int] = None,
                  trials: Optional[int] = None) -> List[ScanRecord]:
        return self._run(grid, modulus, seed, trials)

    def strong_scan(self, grid: GridSpec, modulus: Optional[int] = None, seed: Optional[int] = None,
                    trials: Optional[int] = None) -> List[ScanRecord]:
        if not grid.homogeneous:
            raise PreconditionError("the strong scan runs on homogeneous grids only")
        records = self._run(grid, modulus, seed, trials)
        for record in records:
            if record.relation != 'equal' and record.exception_class == 'none':
                logger.warning("counterexample candidate n=%d A=%s m=%d: hpts %d, g %d",
                               record.n, record.A, record.m, record.hpts.value, record.g_value)
        return records


def summarize_weak(records: List[ScanRecord]) -> ScanSummary:
    return ScanSummary(
        cells=len(records),
        equal=sum(1 for r in records if r.relation == 'equal'),
        hpts_less=sum(1 for r in records if r.relation == 'hpts_less'),
        violations=[r for r in records if r.relation == 'VIOLATION_hpts_greater'],
        bound_exceeded=[r for r in records if r.bound_exceeded],
    )


def summarize_strong(records: List[ScanRecord]) -> StrongScanSummary:
    outside = [r for r in records if r.exception_class == 'none']
    inside = [r for r in records if r.exception_class != 'none']
    return StrongScanSummary(
        cells=len(records),
        equal_outside_exceptions=sum(1 for r in outside if r.relation == 'equal'),
        counterexample_candidates=[r for r in outside if r.relation != 'equal'],
        exceptional_equalities=[r for r in inside if r.relation == 'equal'],
        exceptional_strict=[r for r in inside if r.relation != 'equal'],
        bound_exceeded=[r for r in records if r.bound_exceeded],
    )


def write_records(records: List[ScanRecord], path: str):
    """CSV or JSON by file extension"""
    target = Path(path)
    if target.suffix.lower() == '.csv':
        with target.open('w', newline='', encoding='utf-8') as handle:
            writer = csv.writer(handle)
            writer.writerow(CSV_COLUMNS)
            for record in records:
                writer.writerow(record.csv_row())
    elif target.suffix.lower() == '.json':
        payload = "[\n" + ",\n".join(record.model_dump_json() for record in records) + "\n]\n"
        target.write_text(payload, encoding='utf-8')
    else:
        raise PreconditionError(f"output must end in .csv or .json, got {path}")
    logger.info("wrote %d records to %s", len(records), target)
