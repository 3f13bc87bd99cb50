from collections import Counter

import numpy as np
import pytest

from esfpy.impossibility import (
    PROOF_COVERAGE,
    S3_PATTERNS,
    S4_PATTERNS,
    TABLE3,
    Distribution,
    FormulaSpace,
    FormulaSpaceAssignment,
    ShapeCoverage,
    ShapeType,
    TripleType,
    classify_shape,
    classify_triple,
    covers_sd,
    pattern_counts,
    run_exhaustive,
    shape_coverage_counts,
    summed_candidates,
    verify_counting_argument,
)
from esfpy.impossibility import scan as scan_module
from esfpy.impossibility.formulas import coverage_by_labeling
from esfpy.impossibility.scan import FULL, SHAPES, decode_key, scan_slab, scan_tables
from esfpy.preorders import TotalPreorder, fixed_linear_order, world_triples


@pytest.fixture
def setup_space() -> FormulaSpace:
    return FormulaSpace()


def test_pattern_counts():
    counts = pattern_counts()
    assert counts[TripleType.S4] == len(S4_PATTERNS) == 24
    assert counts[TripleType.S3] == len(S3_PATTERNS) == 12
    assert counts[TripleType.S2] == 12 and counts[TripleType.S1] == 4


def test_classify():
    chain = fixed_linear_order(4)
    assert classify_shape(chain) == ShapeType.T1
    assert classify_shape(TotalPreorder.from_levels([{0, 1}, {2, 3}], 4)) == ShapeType.D1
    assert classify_shape(TotalPreorder.from_levels([{2}, {0, 1}, {3}], 4)) == ShapeType.T3
    assert classify_triple(chain, (0, 1, 2)) == TripleType.S4
    assert classify_triple(TotalPreorder.from_levels([{0}, {1, 2, 3}], 4), (0, 1, 2)) == TripleType.S3
    assert classify_triple(TotalPreorder.flat(4), (1, 2, 3)) == TripleType.S1
    with pytest.raises(ValueError):
        classify_shape(TotalPreorder.flat(4))
    with pytest.raises(ValueError):
        classify_shape(fixed_linear_order(8))
    with pytest.raises(ValueError):
        classify_triple(chain, (0, 0, 1))


def test_type_coverage():
    for t in ShapeType:
        assert len(coverage_by_labeling(t)) == 1, t
        assert shape_coverage_counts(t) == PROOF_COVERAGE[t]
    assert PROOF_COVERAGE[ShapeType.T2] == ShapeCoverage(2, 2)


def test_assignment_count(setup_space: FormulaSpace):
    assert setup_space.assignment_count == 3 ** 6 * 13 ** 4 == 20_820_969
    assert Counter(setup_space.radices) == {1: 5, 3: 6, 13: 4}
    assert [f.models for f in setup_space.formulas] == sorted((f.models for f in setup_space.formulas), reverse=True)


def test_first_assignment_is_two_level(setup_space: FormulaSpace):
    first = setup_space.assignment_at(0)
    assert all(tp.level_count <= 2 for tp in first.images)
    assert first.distribution() == ((0, 0, 0, 4), (6, 0))
    report = covers_sd(first)
    assert not report
    missing = Counter(m.kind for m in report.missing)
    assert missing[TripleType.S4] == 24 and missing[TripleType.S3] == 0


def test_index_of(setup_space: FormulaSpace):
    for index in (0, 1, 28_560, 28_561, 12_345_678, setup_space.assignment_count - 1):
        assert setup_space.index_of(setup_space.assignment_at(index)) == index
    with pytest.raises(ValueError):
        setup_space.assignment_at(setup_space.assignment_count)


def test_maximality_is_enforced(setup_space: FormulaSpace):
    images = list(setup_space.assignment_at(0).images)
    images[-1] = TotalPreorder.flat(4)
    with pytest.raises(ValueError):
        FormulaSpaceAssignment(setup_space.formulas, tuple(images))


def test_formula_space_bounds():
    with pytest.raises(ValueError):
        FormulaSpace(3)
    assert FormulaSpace(3, experimental=True).world_count == 8


def test_scan_tables_match_covers_sd(setup_space: FormulaSpace):
    tables = scan_tables()
    triples = world_triples(4)
    rng = np.random.default_rng(3)
    inner = len(tables.inner_masks)
    for slab, j in zip(rng.integers(len(tables.slab_masks), size=25), rng.integers(inner, size=25)):
        assignment = setup_space.assignment_at(int(slab) * inner + int(j))
        total = int(tables.fixed | tables.slab_masks[slab] | tables.inner_masks[j])
        uncovered = {(t, code) for t in range(len(triples)) for code in range(SHAPES)
                     if not (total >> (t * SHAPES + code)) & 1}
        missing = {(triples.index(m.triple), m.shape) for m in covers_sd(assignment).missing}
        assert uncovered == missing
        n, m = assignment.distribution()
        assert decode_key(int(tables.inner_keys[j])) == n
        assert (tables.two_model_formulas - int(tables.slab_d2[slab]), int(tables.slab_d2[slab])) == m


def test_scan_slab():
    result = scan_slab(0)
    assert result.satisfying == 0 and result.first is None
    assert result.covering.sum() <= len(scan_tables().inner_masks)
    assert int(FULL).bit_length() == 52


def test_summed_candidates_bound_the_table():
    summed = summed_candidates(PROOF_COVERAGE)
    for d, reached in TABLE3.items():
        assert d in summed and reached <= summed[d]
    assert str(Distribution((4, 0, 0, 0), (0, 6))) == "{(4,0,0,0), (0,6)}"


def test_counting_argument_without_scan(monkeypatch):
    def unreachable(*args, **kwargs):
        raise AssertionError("the counting argument scanned the formula space")

    monkeypatch.setattr(scan_module, "run_exhaustive", unreachable)
    monkeypatch.setattr(scan_module, "scan_slab", unreachable)
    result = verify_counting_argument()
    assert result.scan is None and result.rows is None and result.excluded == []
    assert result.fixed == ShapeCoverage(0, 0)
    assert result.impossible and result.holds, result.defects
    assert len(result.summed) == 11 and max(result.summed.values()) == 4
    assert set(TABLE3) < set(result.summed)
    assert result.summed[Distribution((2, 2, 0, 0), (0, 6))] == 4


def test_inflated_coverage_breaks_the_count():
    inflated = dict(PROOF_COVERAGE)
    inflated[ShapeType.T1] = ShapeCoverage(4, 3)
    assert max(summed_candidates(inflated).values()) >= 12


def test_parallel_scan_matches_serial():
    slabs = [0, 1, 364, 728]
    serial = run_exhaustive(slabs=slabs)
    parallel = run_exhaustive(jobs=2, slabs=slabs)
    assert serial.assignments == parallel.assignments == len(slabs) * len(scan_tables().inner_masks)
    assert (parallel.satisfying, parallel.first_satisfying) == (serial.satisfying, serial.first_satisfying)
    assert parallel.distributions == serial.distributions
    assert serial.satisfying == sum(scan_slab(slab).satisfying for slab in slabs) == 0


@pytest.mark.slow
def test_exhaustive_scan_and_counting():
    scan = run_exhaustive()
    assert scan.assignments == 20_820_969
    assert scan.impossible and scan.first_satisfying is None
    result = verify_counting_argument(scan)
    assert result.rows == TABLE3
    assert all(reached < 12 for reached in result.rows.values())
    assert result.holds, result.defects
