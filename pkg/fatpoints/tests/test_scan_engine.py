import csv

import pytest

from fatpoints.engines.scan_engine import (
    CSV_COLUMNS,
    GridSpec,
    ScanEngine,
    cell_predicates,
    degree_bound,
    double_degree_bound,
    double_degree_minus_one_bound,
    exception_class,
    first_order_predicate,
    half_degree_predicate,
    nohyp_predicate,
    nplus3_predicate,
    plus1_predicate,
    rnc_predicate,
    small_multiplicity_predicate,
    summarize_strong,
    summarize_weak,
    write_records,
)
from fatpoints.services.errors import CapExceededError, PreconditionError
from fatpoints.services.settings import Settings
from fatpoints.services.uples import Uple


@pytest.fixture
def scanner():
    return ScanEngine(Settings(trials=2))


def test_exception_classes():
    assert exception_class(2, Uple((2,) * 5), 4) == 'd=n+3'
    assert exception_class(2, Uple((2,) * 6), 4) == 'd=n+4'
    assert exception_class(2, Uple((1,) * 7), 3) == 'n2_d7or8'
    assert exception_class(3, Uple((2,) * 9), 4) == 'n3_d9_m2k'
    assert exception_class(3, Uple((2,) * 9), 5) == 'none'
    assert exception_class(4, Uple((3,) * 14), 6) == 'n4_d14_m2k_k2or3'
    assert exception_class(4, Uple((4,) * 14), 8) == 'none'
    assert exception_class(2, Uple.of(2, 2), 2) == 'none'


def test_rnc_predicate():
    assert rnc_predicate(2, Uple.of(2, 2, 2), 3)
    assert rnc_predicate(4, Uple.of(9), 1)
    assert not rnc_predicate(2, Uple.of(3, 3, 3, 3), 2)


def test_plus1_predicate():
    assert plus1_predicate(3, 5, 2)
    assert not plus1_predicate(2, 7, 2)
    assert plus1_predicate(10, 11, 5)
    with pytest.raises(PreconditionError):
        plus1_predicate(2, 3, 1)


def test_nplus3_predicate():
    assert nplus3_predicate(2, Uple((2,) * 5), 5)
    assert not nplus3_predicate(2, Uple((3,) * 5), 5)
    assert nplus3_predicate(3, Uple((1,) * 6), 2)
    with pytest.raises(PreconditionError):
        nplus3_predicate(2, Uple((2,) * 4), 5)


def test_first_order_predicates():
    assert first_order_predicate(Uple.of(3, 4), 4)
    assert not first_order_predicate(Uple.of(3, 4), 3)
    assert half_degree_predicate(Uple.of(2, 4), 4)
    assert not half_degree_predicate(Uple.of(2, 4), 2)
    assert nohyp_predicate(Uple.of(1, 2, 3), 3)
    assert not nohyp_predicate(Uple.of(1, 3, 3), 3)
    assert small_multiplicity_predicate(Uple.of(4, 4, 1))
    assert not small_multiplicity_predicate(Uple.of(5, 1))


def test_cell_predicates():
    names = cell_predicates(2, Uple.of(2, 2), 2)
    assert "rnc" in names and "small_mult" in names
    assert "d_n_plus_5" in cell_predicates(2, Uple((1,) * 7), 3)


def test_double_degree_bounds():
    # five double points in the plane: 15 - 10 in degree 2
    assert double_degree_bound(2, 5, 2) == 5
    assert double_degree_minus_one_bound(2, 3, 4) == 3 * 10 - 3 * 3
    with pytest.raises(PreconditionError):
        double_degree_minus_one_bound(2, 3, 3)


def test_grid_cells():
    grid = GridSpec(n_values=[2], d_max=3, k_max=2, m_max=4)
    cells = grid.cells()
    assert len(cells) == (2 + 3 + 4) * 5
    homogeneous = GridSpec(n_values=[2, 3], d_min=2, d_max=3, k_max=2, m_min=1, m_max=2, homogeneous=True)
    assert len(homogeneous.cells()) == 2 * 2 * 2 * 2


def test_grid_rejects_empty_range():
    with pytest.raises(ValueError):
        GridSpec(n_values=[2], d_min=4, d_max=3, k_max=2, m_max=2)


def test_cap_is_enforced(scanner):
    with pytest.raises(CapExceededError):
        scanner.weak_scan(GridSpec(n_values=[4], d_max=1, k_max=1, m_max=30))


def test_single_cells(scanner):
    record = scanner.evaluate((2, Uple.of(2, 2), 2), 1000003, 0, 2)
    assert (record.hpts.value, record.g_value, record.relation) == (5, 5, 'equal')
    record = scanner.evaluate((2, Uple((2,) * 5), 4), 1000003, 0, 2)
    assert (record.hpts.value, record.g_value, record.relation) == (14, 15, 'hpts_less')
    assert record.exception_class == 'd=n+3'


def test_weak_scan_plane(scanner):
    records = scanner.weak_scan(GridSpec(n_values=[2], d_max=3, k_max=3, m_max=6))
    summary = summarize_weak(records)
    assert summary.cells == len(records)
    assert not summary.violations
    for record in records:
        if 'rnc' in record.predicates:
            assert record.relation == 'equal'


def test_strong_scan_exception_cell(scanner):
    records = scanner.strong_scan(GridSpec(n_values=[2], d_min=5, d_max=5, k_min=2, k_max=2, m_min=4, m_max=4,
                                           homogeneous=True))
    summary = summarize_strong(records)
    assert summary.cells == 1
    assert not summary.counterexample_candidates
    assert len(summary.exceptional_strict) == 1


def test_strong_scan_needs_homogeneous_grid(scanner):
    with pytest.raises(PreconditionError):
        scanner.strong_scan(GridSpec(n_values=[2], d_max=2, k_max=2, m_max=2))


def test_plus1_cells_are_equal(scanner):
    grid = GridSpec(n_values=[2, 3], d_max=8, k_min=2, k_max=3, m_min=3, m_max=4, homogeneous=True)
    for record in scanner.strong_scan(grid):
        if 'plus1' in record.predicates:
            assert record.relation == 'equal'


def test_write_records(scanner, tmp_path):
    records = scanner.weak_scan(GridSpec(n_values=[2], d_max=2, k_max=2, m_max=2))
    target = tmp_path / "scan.csv"
    write_records(records, str(target))
    with target.open(newline='') as handle:
        rows = list(csv.reader(handle))
    assert rows[0] == CSV_COLUMNS
    assert len(rows) == len(records) + 1
    assert rows[1][-1] == "1000003"

    target = tmp_path / "scan.json"
    write_records(records, str(target))
    assert target.read_text().count('"relation"') == len(records)

    with pytest.raises(PreconditionError):
        write_records(records, str(tmp_path / "scan.txt"))


def test_scan_is_deterministic_across_workers():
    grid = GridSpec(n_values=[2], d_max=3, k_max=2, m_max=4)
    serial = ScanEngine(Settings(trials=1, workers=1)).weak_scan(grid)
    parallel = ScanEngine(Settings(trials=1, workers=4)).weak_scan(grid)
    assert [r.model_dump() for r in serial] == [r.model_dump() for r in parallel]


@pytest.mark.slow
def test_weak_conjecture_sweep_up_to_p3():
    records = ScanEngine(Settings(trials=3)).weak_scan(GridSpec(n_values=[1, 2, 3], d_max=8, k_max=4, m_max=10))
    assert not summarize_weak(records).violations


@pytest.mark.slow
def test_rnc_cells_equal_up_to_p4():
    records = ScanEngine(Settings(trials=3)).weak_scan(GridSpec(n_values=[2, 3, 4], d_max=8, k_max=4, m_max=10))
    for record in records:
        if 'rnc' in record.predicates:
            assert record.relation == 'equal'


def test_degree_bound_cells():
    assert degree_bound(2, Uple.of(3, 3), 4) == ('double_degree', 11)
    assert degree_bound(2, Uple.of(2, 2), 2) == ('double_degree', 5)
    assert degree_bound(2, Uple.of(3, 3), 5) is None
    # no conic is singular at five general points
    assert degree_bound(2, Uple((2,) * 5), 2) is None
    assert degree_bound(2, Uple.of(3, 2), 4) is None
    assert 'double_degree' in cell_predicates(2, Uple.of(3, 3), 4)


def test_degree_bounds_hold_on_homogeneous_grid(scanner):
    grid = GridSpec(n_values=[2, 3], d_max=5, k_min=2, k_max=4, m_min=2, m_max=6, homogeneous=True)
    records = scanner.strong_scan(grid)
    bounded = [r for r in records if r.degree_bound is not None]
    assert bounded
    assert {'double_degree', 'double_degree_minus_one'} <= {p for r in bounded for p in r.predicates}
    for record in bounded:
        assert record.hpts.value <= record.degree_bound
        assert record.degree_bound == record.g_value
    assert summarize_strong(records).bound_exceeded == []


def test_degree_bound_on_evaluated_cell(scanner):
    record = scanner.evaluate((2, Uple.of(3, 3), 4), 1000003, 0, 2)
    assert (record.hpts.value, record.degree_bound, record.bound_exceeded) == (11, 11, False)


def test_strong_scan_plane_beyond_exceptions(scanner):
    grid = GridSpec(n_values=[2], d_min=9, d_max=12, k_max=3, m_min=1, m_max=10, homogeneous=True)
    records = scanner.strong_scan(grid)
    assert all(r.exception_class == 'none' for r in records)
    summary = summarize_strong(records)
    assert summary.cells == 4 * 3 * 10
    assert summary.counterexample_candidates == []


def test_nine_double_points_in_p3(scanner):
    record = scanner.evaluate((3, Uple((2,) * 9), 4), 1000003, 0, 2)
    assert record.exception_class == 'n3_d9_m2k'
    # the doubled quadric through the nine points
    assert (record.hpts.value, record.g_value, record.relation) == (34, 35, 'hpts_less')


@pytest.mark.slow
def test_plus1_cells_equal_up_to_p4():
    grid = GridSpec(n_values=[2, 3, 4], d_max=10, k_min=2, k_max=4, m_min=3, m_max=5, homogeneous=True)
    records = ScanEngine(Settings(trials=3)).strong_scan(grid)
    plus1 = [r for r in records if 'plus1' in r.predicates]
    assert plus1
    assert all(r.relation == 'equal' for r in plus1)
