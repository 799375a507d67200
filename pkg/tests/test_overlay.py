import pytest

from app.ea.scan import earliest_arrival, scan_earliest_arrival
from app.errors import IndexMismatchError, InvalidParameterError, PartitionInfeasibleError
from app.harness.benchmark import checksum
from app.harness.generators import grid_of_cities
from app.harness.queries import Query, generate_queries
from app.overlay.customize import customize
from app.overlay.merge import assemble_connection_subset, merge_two, query_cells
from app.overlay.partition import (
    check_partition,
    cut_weight,
    format_partition,
    parse_partition,
    partition_stops,
    single_cell_partition,
)
from app.overlay.query import accel_query
from app.overlay.storage import load_overlay, save_overlay
from app.overlay.transfers import min_transfer_profiles
from app.profile.scan import ea_profile, filter_range, pareto_profile, range_query
from app.profile.vectors import as_tuple
from app.timetable.loader import load_timetable


@pytest.fixture(scope="module")
def grid_overlay(small_grid):
    partition = partition_stops(small_grid, k=2, levels=2, seed=0)
    return customize(small_grid, partition, threads=2, seed=0)


def _grid_queries(tt, n, seed):
    # la mitad de las horas caen en la ventana de servicio
    queries = list(generate_queries(tt, n, seed=seed))
    return [
        q if i % 2 else Query(q.source, q.target, 6 * 3600 + q.time % (5 * 3600))
        for i, q in enumerate(queries)
    ]


# ==================== PARTICIÓN ====================

def test_partition_shape(small_grid):
    partition = partition_stops(small_grid, k=2, levels=2, seed=0)
    check_partition(small_grid, partition)
    assert len(partition.cells(2)) == 4
    assert sum(len(partition.members(cell)) for cell in partition.cells(2)) == small_grid.num_stops
    for stop in range(small_grid.num_stops):
        chain = partition.cell_chain(stop)
        assert chain[0] == ()
        assert all(partition.contains(cell, stop) for cell in chain)


def test_walking_pairs_share_a_cell(small_grid):
    partition = partition_stops(small_grid, k=2, levels=2, seed=1)
    for f in small_grid.footpaths:
        assert partition.cell_of(f.dep_stop) == partition.cell_of(f.arr_stop)


def test_cut_grows_with_level(small_grid):
    partition = partition_stops(small_grid, k=2, levels=2, seed=0)
    assert cut_weight(small_grid, single_cell_partition(small_grid)) == 0
    assert cut_weight(small_grid, partition, level=0) == 0
    assert cut_weight(small_grid, partition, level=1) <= cut_weight(small_grid, partition)


def test_walking_group_larger_than_cell_is_infeasible():
    text = (
        "S a 0\nS b 0\nS c 0\nS d 0\nT r\nC r a d 0 10\n"
        "F a b 60\nF b a 60\nF b c 60\nF c b 60\n"
    )
    tt = load_timetable(text, synthesize_closure=True)
    with pytest.raises(PartitionInfeasibleError):
        partition_stops(tt, k=2, levels=1, imbalance=0.0)


def test_partition_parameters(small_grid):
    with pytest.raises(InvalidParameterError):
        partition_stops(small_grid, k=0, levels=2)
    with pytest.raises(InvalidParameterError):
        partition_stops(small_grid, k=2, levels=2, imbalance=-0.1)


def test_partition_text_format(small_grid):
    partition = partition_stops(small_grid, k=2, levels=2, seed=0)
    text = format_partition(small_grid, partition)
    assert text.startswith("# k=2 levels=2")
    assert parse_partition(small_grid, text, k=2) == partition

    missing = "\n".join(text.splitlines()[:-1])
    with pytest.raises(PartitionInfeasibleError):
        parse_partition(small_grid, missing)
    with pytest.raises(InvalidParameterError):
        parse_partition(small_grid, "P c0s0 x/y\n")


# ==================== PERSONALIZACIÓN ====================

def test_thinned_cells_are_a_disjoint_cover(small_grid, grid_overlay):
    seen = []
    for cell, ids in grid_overlay.cells.items():
        assert list(ids) == sorted(ids)
        assert len(cell) <= grid_overlay.levels
        seen.extend(ids)
    assert sorted(seen) == list(range(small_grid.num_connections))
    assert grid_overlay.total_connections() == small_grid.num_connections


def test_bottom_cells_only_hold_local_departures(small_grid, grid_overlay):
    partition = grid_overlay.partition
    for cell, ids in grid_overlay.cells.items():
        for cid in ids:
            assert partition.contains(cell, small_grid.connections[cid].dep_stop)


def test_thread_count_does_not_change_index(small_grid, grid_overlay):
    single = customize(small_grid, grid_overlay.partition, threads=1)
    assert single.cells == grid_overlay.cells


def test_single_cell_overlay_keeps_everything(random_timetables):
    tt = random_timetables[0]
    overlay = customize(tt, single_cell_partition(tt))
    assert overlay.cells == {(0,): tuple(range(tt.num_connections))}
    for q in generate_queries(tt, 10, seed=2):
        result = accel_query(overlay, tt, q.source, q.time, q.target, kind="ea")
        assert result.arrival == earliest_arrival(tt, q.source, q.time, q.target)


def test_min_transfer_marks_boardings_and_alightings():
    text = (
        "S e 0\nS a 0\nS b 0\nS d 0\nT one\nT two\nT three\n"
        "C one e a 0 10\nC two a b 20 30\nC three b d 40 50\n"
    )
    tt = load_timetable(text)
    cell = {tt.stop_id("a"), tt.stop_id("b")}
    result = min_transfer_profiles(tt, cell, [0, 1, 2], exit_id=2, sources=[0])
    assert result.transfers == {0: 2}
    assert result.marked == {1, 2}


# ==================== CONSULTAS ACELERADAS ====================

def test_query_cells_include_root(grid_overlay):
    cells = query_cells(grid_overlay, 0, 1)
    assert () in cells
    assert grid_overlay.partition.cell_of(0) in cells


def test_merge_two_keeps_order():
    assert merge_two([1, 4, 9], [2, 3, 10]) == [1, 2, 3, 4, 9, 10]
    assert merge_two([], [5]) == [5]


def test_subset_is_sorted_and_starts_at_time(small_grid, grid_overlay):
    s, t = small_grid.stop_id("c0s3"), small_grid.stop_id("c3s4")
    subset = assemble_connection_subset(grid_overlay, small_grid, s, t)
    assert subset == sorted(subset)
    assert len(subset) < small_grid.num_connections

    lazy = list(assemble_connection_subset(grid_overlay, small_grid, s, t, from_time=8 * 3600))
    assert lazy == [cid for cid in subset if small_grid.connections[cid].dep_time >= 8 * 3600]


def test_accelerated_earliest_arrival_matches_base(small_grid, grid_overlay):
    for q in _grid_queries(small_grid, 50, seed=8):
        result = accel_query(grid_overlay, small_grid, q.source, q.time, q.target, kind="ea")
        assert result.arrival == earliest_arrival(small_grid, q.source, q.time, q.target)


def test_accelerated_profiles_match_base(small_grid, grid_overlay):
    for q in _grid_queries(small_grid, 12, seed=9):
        store = accel_query(grid_overlay, small_grid, q.source, None, q.target, kind="ea-profile")
        base = ea_profile(small_grid, q.target)
        assert store.earliest_arrival(q.source, q.time) == base.earliest_arrival(q.source, q.time)

        vec = accel_query(
            grid_overlay, small_grid, q.source, None, q.target, kind="pareto-profile", leg_max=4
        ).evaluate(q.source, q.time)
        expected = pareto_profile(small_grid, q.target, 4).evaluate(q.source, q.time)
        assert as_tuple(vec) == as_tuple(expected)


def test_accelerated_range_matches_base(small_grid, grid_overlay):
    for q in _grid_queries(small_grid, 12, seed=10):
        fast = accel_query(grid_overlay, small_grid, q.source, q.time, q.target, kind="range")
        base = range_query(small_grid, q.source, q.time, q.target)
        assert fast.earliest_arrival == base.earliest_arrival
        assert fast.horizon == base.horizon
        if not base.reachable:
            continue
        got = filter_range(fast.store.pairs(q.source), q.time, fast.horizon)
        expected = filter_range(base.store.pairs(q.source), q.time, base.horizon)
        assert got == expected


def test_unknown_query_kind(small_grid, grid_overlay):
    with pytest.raises(InvalidParameterError):
        accel_query(grid_overlay, small_grid, 0, 0, 1, kind="meat")
    with pytest.raises(InvalidParameterError):
        accel_query(grid_overlay, small_grid, 0, None, 1, kind="ea")


# ==================== PERSISTENCIA ====================

def test_saved_index_loads_and_checks_timetable(tmp_path, small_grid, grid_overlay, hops):
    path = tmp_path / "grid.overlay.json"
    save_overlay(grid_overlay, path)
    loaded = load_overlay(path, small_grid)
    assert loaded.cells == grid_overlay.cells
    assert loaded.partition == grid_overlay.partition
    assert loaded.timetable_hash == grid_overlay.timetable_hash

    with pytest.raises(IndexMismatchError):
        load_overlay(path, hops)


def test_corrupt_index_is_rejected(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text('{"version": 99}', encoding="utf-8")
    with pytest.raises(IndexMismatchError):
        load_overlay(path)


# ==================== ESCALA COMPLETA ====================

def _city(tt, stop):
    return tt.stops[stop].code.split("s")[0]


@pytest.mark.slow
def test_accelerated_queries_on_large_grid():
    tt = grid_of_cities(cities=20, seed=5)
    assert tt.num_connections >= 100_000
    overlay = customize(tt, partition_stops(tt, k=4, levels=2, seed=0), threads=4, seed=0)
    seen = sorted(cid for ids in overlay.cells.values() for cid in ids)
    assert seen == list(range(tt.num_connections))

    # horas dentro de la ventana de servicio
    queries = [
        Query(q.source, q.target, 6 * 3600 + q.time % (15 * 3600))
        for q in generate_queries(tt, 500, seed=21)
    ]
    base = {"ea": [], "ea-profile": [], "pareto-profile": [], "range": []}
    fast = {kind: [] for kind in base}
    cross = fewer = 0
    for q in queries:
        plain = scan_earliest_arrival(tt, q.source, q.time, q.target)
        accel = accel_query(overlay, tt, q.source, q.time, q.target, kind="ea")
        base["ea"].append(plain.arrival)
        fast["ea"].append(accel.arrival)
        if _city(tt, q.source) != _city(tt, q.target):
            cross += 1
            fewer += accel.scanned < plain.scanned

        base["ea-profile"].append(ea_profile(tt, q.target).earliest_arrival(q.source, q.time))
        store = accel_query(overlay, tt, q.source, None, q.target, kind="ea-profile")
        fast["ea-profile"].append(store.earliest_arrival(q.source, q.time))

        base["pareto-profile"].append(as_tuple(pareto_profile(tt, q.target, 4).evaluate(q.source, q.time)))
        store = accel_query(overlay, tt, q.source, None, q.target, kind="pareto-profile", leg_max=4)
        fast["pareto-profile"].append(as_tuple(store.evaluate(q.source, q.time)))

        for answers, result in (
            (base["range"], range_query(tt, q.source, q.time, q.target)),
            (fast["range"], accel_query(overlay, tt, q.source, q.time, q.target, kind="range")),
        ):
            pairs = filter_range(result.store.pairs(q.source), q.time, result.horizon) if result.reachable else []
            answers.append([result.earliest_arrival, result.horizon, pairs])

    for kind in base:
        assert checksum(fast[kind]) == checksum(base[kind]), kind
    assert cross > 0
    assert fewer >= 0.9 * cross
