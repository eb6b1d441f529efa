import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bpsloc.geometry import Beacon, Deployment, Domain, Point, Signature, make_deployment, signature_at
from bpsloc.sigmap import (
    GridSpec,
    build_signature_map,
    expected_uncertainty,
    group_rows,
    localize,
    uncertainty_for_reading,
)
from oracles import brute_force_cell_signatures, brute_force_counts

# one beacon at (50, 50), r=10, unit grid on 100x100: 316 cell centers inside
# (counted by the double loop in oracles.py)
DISK_CELLS = 316


@pytest.fixture
def disk_map():
    dep = make_deployment(Domain(), [(50, 50, 10)])
    return build_signature_map(dep)


def test_default_grid_has_ten_thousand_cells():
    smap = build_signature_map(Deployment(Domain()))
    assert smap.ncells == 10000
    assert smap.shape == (100, 100)


def test_zero_beacons_single_group():
    smap = build_signature_map(Deployment(Domain()))
    assert list(smap.counts) == [10000]
    assert smap.signatures == [Signature(())]
    assert uncertainty_for_reading(smap, Signature(())) == 100.0
    assert expected_uncertainty(smap) == 100.0


def test_full_coverage_beacon():
    smap = build_signature_map(make_deployment(Domain(), [(50, 50, 100)]))
    table = smap.table()
    assert list(table) == [Signature((1,))]
    cells, area = table[Signature((1,))]
    assert cells.size == 10000 and area == 10000.0


def test_oracle_count_for_single_disk():
    sigs = brute_force_cell_signatures(100, 100, 1.0, [(50, 50, 10)])
    assert brute_force_counts(sigs)["1"] == DISK_CELLS


def test_uncertainty_single_disk(disk_map):
    assert uncertainty_for_reading(disk_map, Signature((1,))) == pytest.approx(DISK_CELLS / 100, abs=1e-12)
    assert uncertainty_for_reading(disk_map, Signature((0,))) == pytest.approx(100 - DISK_CELLS / 100, abs=1e-12)
    assert abs(DISK_CELLS / 100 - np.pi) < 0.05


def test_expected_uncertainty_single_disk(disk_map):
    p = DISK_CELLS / 10000
    assert expected_uncertainty(disk_map) == pytest.approx(100 * (p * p + (1 - p) ** 2), rel=1e-12)


def test_expected_uncertainty_all_distinct():
    # 4 cells, beacons chosen so every cell center has its own signature
    dep = make_deployment(Domain(2, 2), [(0, 0, 1), (2, 0, 1), (0, 2, 1)])
    smap = build_signature_map(dep)
    assert smap.counts.size == 4
    assert expected_uncertainty(smap) == pytest.approx(100 / 4)


def test_localize_whole_domain():
    res = localize(build_signature_map(Deployment(Domain())), Signature(()))
    assert res.uncertainty_pct == 100.0
    assert res.area == 10000.0
    assert res.centroid == Point(50.0, 50.0)
    assert not res.empty


def test_localize_disk(disk_map):
    res = localize(disk_map, Signature((1,)))
    assert res.cells.size == DISK_CELLS
    assert res.centroid.x == pytest.approx(50.0, abs=1e-9)
    assert res.centroid.y == pytest.approx(50.0, abs=1e-9)
    assert res.uncertainty_pct == uncertainty_for_reading(disk_map, Signature((1,)))


def test_localize_length_mismatch(disk_map):
    with pytest.raises(ValueError):
        localize(disk_map, Signature((1, 0)))
    with pytest.raises(ValueError):
        uncertainty_for_reading(disk_map, Signature(()))


def test_localize_unmatched_reading_is_flagged():
    dep = make_deployment(Domain(), [(10, 10, 5), (90, 90, 5)])
    smap = build_signature_map(dep)
    res = localize(smap, Signature((1, 1)))
    assert res.empty and res.centroid is None and res.uncertainty_pct == 0.0
    assert uncertainty_for_reading(smap, Signature((1, 1))) == 0.0


@pytest.mark.parametrize("cell", [0.3, 7.0, 40.0])
def test_grid_must_tile_domain(cell):
    with pytest.raises(ValueError):
        build_signature_map(Deployment(Domain()), GridSpec(cell))


def test_half_unit_grid():
    smap = build_signature_map(make_deployment(Domain(10, 5), [(2, 2, 3)]), GridSpec(0.5))
    assert smap.shape == (20, 10)
    assert sum(a for _, a in smap.table().values()) == 50.0


def test_group_rows_orders_by_first_appearance():
    bits = np.array([[1, 0], [0, 0], [1, 0], [1, 1], [0, 0]], dtype=bool)
    labels, packed, counts = group_rows(bits)
    assert list(labels) == [0, 1, 0, 2, 1]
    assert list(counts) == [2, 2, 1]


def test_group_rows_wide_signatures():
    rng = np.random.default_rng(0)
    bits = rng.random((500, 70)) < 0.5
    bits[250] = bits[3]
    labels, packed, counts = group_rows(bits)
    assert labels[250] == labels[3]
    assert counts.sum() == 500 and counts.size == 499


def test_cell_signature_lookup_matches_point_query():
    dep = make_deployment(Domain(), [(20, 30, 25), (70, 60, 30), (40, 80, 15)])
    smap = build_signature_map(dep)
    for ix, iy in [(0, 0), (20, 30), (69, 59), (99, 99), (40, 80)]:
        assert smap.signature_of_cell(ix, iy) == signature_at(dep, Point(ix + 0.5, iy + 0.5))


small_beacons = st.lists(
    st.tuples(st.floats(0, 20), st.floats(0, 20), st.floats(0, 15)), min_size=0, max_size=4
)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 20), st.integers(1, 20), small_beacons)
def test_matches_brute_force(w, h, rows):
    rows = [(min(x, w), min(y, h), r) for x, y, r in rows]
    dep = make_deployment(Domain(w, h), rows)
    smap = build_signature_map(dep)
    sigs = brute_force_cell_signatures(w, h, 1.0, rows)
    expected = brute_force_counts(sigs)
    got = {str(s): int(n) for s, n in zip(smap.signatures, smap.counts)}
    assert got == expected
    strings = [str(s) for s in smap.signatures]
    assert [strings[g] for g in smap.labels] == sigs


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(st.floats(0, 100), st.floats(0, 100), st.floats(0, 80)), max_size=10))
def test_conservation_and_consistency(rows):
    smap = build_signature_map(make_deployment(Domain(), rows))
    assert int(smap.counts.sum()) == 10000
    assert sum(a for _, a in smap.table().values()) == 10000.0
    for sig in smap.signatures:
        u = uncertainty_for_reading(smap, sig)
        assert u >= 100 / 10000
        assert localize(smap, sig).uncertainty_pct == u


@settings(max_examples=30, deadline=None)
@given(
    st.lists(st.tuples(st.floats(0, 100), st.floats(0, 100), st.floats(0, 80)), min_size=1, max_size=8),
    st.randoms(use_true_random=False),
)
def test_expected_uncertainty_reorder_invariant(rows, rnd):
    dep = make_deployment(Domain(), rows)
    order = list(range(len(rows)))
    rnd.shuffle(order)
    a = expected_uncertainty(build_signature_map(dep))
    b = expected_uncertainty(build_signature_map(dep.permuted(order)))
    assert a == b


def test_expected_equals_mean_over_cells():
    dep = make_deployment(Domain(30, 30), [(5, 5, 12), (25, 10, 9), (15, 25, 14)])
    smap = build_signature_map(dep)
    nx, ny = smap.shape
    per_cell = [uncertainty_for_reading(smap, smap.signature_of_cell(ix, iy)) for iy in range(ny) for ix in range(nx)]
    assert expected_uncertainty(smap) == pytest.approx(np.mean(per_cell), rel=1e-12)
