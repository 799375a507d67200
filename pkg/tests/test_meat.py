import math

import numpy as np
import pytest
from scipy import stats

from app.errors import InvalidDecisionGraphError, InvalidParameterError
from app.harness.generators import random_dag, risky_transfer
from app.harness.queries import generate_queries
from app.harness.simulation import monte_carlo_eat
from app.meat.contraction import contract_footpaths
from app.meat.delay import (
    DelayModel,
    delay_cdf,
    delay_quantile,
    expected_delay,
    expected_delay_numeric,
)
from app.meat.graph import (
    compact_representation,
    decision_graph_eat,
    extract_decision_graph,
    to_dot,
    to_text,
)
from app.meat.scan import eat_lower_bound, esat, meat_profile_scan
from app.meat.solver import solve_alpha_bounded
from app.timetable.builder import TimetableBuilder
from app.timetable.loader import load_timetable

MODEL = DelayModel(1200)


def _trips(tt, graph):
    return sorted(tt.trips[tt.connections[leg.enter].trip].code for leg in graph.legs)


def _solve(tt, alpha=2.0, model=MODEL, **kwargs):
    return solve_alpha_bounded(tt, tt.stop_id("s"), 0, tt.stop_id("t"), alpha, model, **kwargs)


# ==================== MODELO DE RETRASOS ====================

def test_delay_cdf_values():
    assert delay_cdf(60, 600, -1) == 0.0
    assert delay_cdf(60, 600, 0) == 0.0
    assert delay_cdf(60, 600, 60) == pytest.approx(2 / 3)
    assert delay_cdf(60, 600, 100) == pytest.approx(2440 / 3000)
    assert delay_cdf(60, 1200, 300) == pytest.approx(9840 / 10800)
    assert delay_cdf(60, 600, 660) == 1.0
    assert delay_cdf(0, 60, 0) == pytest.approx(2 / 3)


def test_delay_cdf_is_monotone():
    xs = range(0, 1400, 7)
    values = [delay_cdf(120, 1200, x) for x in xs]
    assert values == sorted(values)
    assert values[-1] == 1.0


def test_quantile_inverts_cdf():
    for y in (0.1, 0.5, 2 / 3, 0.8, 0.99):
        assert delay_cdf(60, 1200, delay_quantile(60, 1200, y)) == pytest.approx(y)
    assert delay_quantile(60, 1200, 1.0) == pytest.approx(1260)
    with pytest.raises(InvalidParameterError):
        delay_quantile(60, 1200, 1.5)


@pytest.mark.parametrize("m,d", [(0, 60), (60, 600), (60, 1200), (300, 3600)])
def test_expected_delay_matches_quadrature(m, d):
    assert expected_delay(m, d) == pytest.approx(expected_delay_numeric(m, d), rel=1e-7)


def test_sampled_delays_follow_cdf():
    tt = risky_transfer("simple")
    c = tt.connections[0]
    rng = np.random.default_rng(11)
    samples = np.array([MODEL.sample(tt, c, u) for u in rng.random(20_000)])
    m = tt.change_time(c.arr_stop)
    edges = [0, 30, 60, 120, 300, 600, 900, MODEL.max_delay_of(tt, c)]
    observed, _ = np.histogram(samples, bins=edges)
    probs = np.diff([delay_cdf(m, MODEL.max_delay, x) for x in edges])
    _, p_value = stats.chisquare(observed, probs * len(samples))
    assert p_value > 1e-3


def test_invalid_delay_parameters():
    with pytest.raises(InvalidParameterError):
        delay_cdf(-1, 600, 10)
    with pytest.raises(InvalidParameterError):
        DelayModel(0)


def test_max_delay_includes_change_time():
    tt = risky_transfer("simple")
    c = tt.connections[0]
    assert MODEL.max_delay_of(tt, c) == 1260


# ==================== CONTRACCIÓN ====================

def test_contraction_merges_walking_groups():
    text = (
        "S a 60\nS b 30\nS c 0\nS d 0\nT r\nT q\n"
        "C r a c 0 100\nC q d b 200 300\nC q b a 310 320\n"
        "F a b 90\nF b a 90\n"
    )
    tt = load_timetable(text)
    contracted = contract_footpaths(tt)
    ctt = contracted.timetable
    assert ctt.num_stops == 3
    merged = contracted.stop(tt.stop_id("a"))
    assert contracted.stop(tt.stop_id("b")) == merged
    assert ctt.stops[merged].code == "a+b"
    assert ctt.change_time(merged) == 150
    # b→a queda dentro del grupo y se descarta
    assert ctt.num_connections == 2
    assert len(contracted.original_connection) == 2
    assert all(f.is_loop for f in ctt.footpaths)


def test_contraction_without_footpaths_keeps_codes():
    tt = risky_transfer("backup-chain")
    contracted = contract_footpaths(tt)
    assert sorted(s.code for s in contracted.timetable.stops) == ["a", "b", "s", "t"]
    assert contracted.timetable.num_connections == tt.num_connections


def test_meat_scan_rejects_walking():
    tt = load_timetable("S a 0\nS b 0\nT r\nC r a b 0 10\nF a b 60\nF b a 60\n")
    with pytest.raises(InvalidParameterError):
        meat_profile_scan(tt, tt.stop_id("b"), MODEL)


# ==================== PERFILES Y ESAT ====================

def test_single_connection_profile():
    tt = load_timetable("S s 0\nS t 0\nT r\nC r s t 0 10\n")
    model = DelayModel(60)
    store = meat_profile_scan(tt, tt.stop_id("t"), model)
    expected = 10 + expected_delay_numeric(0, 60)
    assert store.expected_arrival(tt.stop_id("s"), 0) == pytest.approx(expected, rel=1e-8)
    assert math.isinf(store.expected_arrival(tt.stop_id("s"), 1))


def test_chain_with_exact_slack_is_certain():
    b = TimetableBuilder()
    for stop in ("s", "a", "t"):
        b.add_stop(stop, 0)
    b.add_run("r1", ["s", "a"], [(0, 10)])
    b.add_run("r2", ["a", "t"], [(70, 80)])
    tt = b.build()
    model = DelayModel(60)
    s, t = tt.stop_id("s"), tt.stop_id("t")
    store = meat_profile_scan(tt, t, model)
    assert store.expected_arrival(s, 0) == pytest.approx(80 + expected_delay(0, 60))
    assert esat(tt, s, 0, t, model) == 80


def test_esat_and_lower_bound():
    tt = risky_transfer("simple")
    s, t = tt.stop_id("s"), tt.stop_id("t")
    assert esat(tt, s, 0, t, MODEL) == 3000
    assert eat_lower_bound(tt, s, 0, t) == 1500
    assert esat(tt, s, 0, s, MODEL) == 0
    assert esat(tt, t, 0, s, MODEL) is None
    assert eat_lower_bound(tt, t, 0, s) is None


def test_simple_risky_transfer_expected_arrival():
    tt = risky_transfer("simple")
    solution = _solve(tt)
    p = delay_cdf(60, 1200, 300)
    e = expected_delay(60, 1200)
    expected = p * (1500 + e) + (1 - p) * (3000 + e)
    assert solution.expected_arrival == pytest.approx(expected)
    assert _trips(solution.timetable, solution.graph) == ["BACKUP", "P1", "RISKY"]
    assert solution.esat == 3000
    assert solution.expected_arrival < 3000 + e


def test_beta_suppresses_small_improvements():
    tt = risky_transfer("simple")
    t = tt.stop_id("t")
    a = tt.stop_id("a")
    strict = meat_profile_scan(tt, t, MODEL)
    relaxed = meat_profile_scan(tt, t, MODEL, beta=2000)
    assert len(strict.profile(a)) == 2
    assert len(relaxed.profile(a)) == 1
    with pytest.raises(InvalidParameterError):
        meat_profile_scan(tt, t, MODEL, beta=-1)


# ==================== GRAFOS DE DECISIÓN ====================

def test_backup_chain_graph():
    tt = risky_transfer("backup-chain")
    solution = _solve(tt, alpha=1.0)
    ctt = solution.timetable
    graph = solution.graph
    assert solution.esat == 4600
    assert graph.max_arr_time == 4600
    assert graph.arc_count == 6
    assert graph.complete
    transfer_stops = {ctt.stops[x].code for x in graph.stops(ctt)} - {"s", "t"}
    assert transfer_stops == {"a", "b"}
    departures = graph.departures(ctt)
    assert len(departures[ctt.stop_id("b")]) == 3
    assert compact_representation(graph, ctt).arc_count == 3
    assert compact_representation(graph, ctt).arc_count < graph.arc_count


def test_window_zero_degenerates_to_single_path():
    tt = risky_transfer("backup-chain")
    solution = _solve(tt, alpha=1.0)
    graph = extract_decision_graph(solution.store, solution.graph.source, 0, kappa=0)
    assert _trips(solution.timetable, graph) == ["P1", "P2", "P3"]
    assert not graph.complete
    with pytest.raises(InvalidDecisionGraphError):
        decision_graph_eat(graph, solution.timetable, MODEL)


def test_full_window_keeps_backup():
    tt = risky_transfer("simple")
    solution = _solve(tt)
    graph = extract_decision_graph(solution.store, solution.graph.source, 0, kappa=1260)
    assert "BACKUP" in _trips(solution.timetable, graph)
    assert graph.complete


def test_alpha_bounds_latest_arrival():
    tt = risky_transfer("late-backup")
    model = DelayModel(600)
    tight = _solve(tt, alpha=1.0, model=model)
    assert tight.esat == 1200
    assert _trips(tight.timetable, tight.graph) == ["DIRECT"]
    assert tight.graph.max_arr_time <= tight.esat

    loose = _solve(tt, alpha=2.0, model=model)
    assert _trips(loose.timetable, loose.graph) == ["BACKUP", "P1", "RISKY"]
    e = expected_delay(60, 600)
    assert loose.expected_arrival < 1200 + e
    assert tight.expected_arrival == pytest.approx(1200 + e)


def test_alpha_below_one_is_rejected():
    with pytest.raises(InvalidParameterError):
        _solve(risky_transfer("simple"), alpha=0.5)


def test_unreachable_gives_no_graph():
    tt = risky_transfer("simple")
    assert solve_alpha_bounded(tt, tt.stop_id("t"), 0, tt.stop_id("s"), 2.0, MODEL) is None


def test_source_and_target_in_same_walking_group():
    tt = load_timetable("S a 0\nS b 0\nS c 0\nT r\nC r a c 0 10\nF a b 60\nF b a 60\n")
    with pytest.raises(InvalidParameterError):
        solve_alpha_bounded(tt, tt.stop_id("a"), 0, tt.stop_id("b"), 2.0, MODEL)


def test_arc_budget_picks_largest_window():
    tt = risky_transfer("backup-chain")
    # con 3 arcos cabe el grafo completo
    roomy = _solve(tt, alpha=1.0, arc_budget=3)
    assert roomy.compact.arc_count == 3
    assert roomy.graph.arc_count == 6
    assert roomy.graph.complete

    # ni el camino único s→a→b→t cabe en 2 arcos
    with pytest.raises(InvalidParameterError):
        _solve(tt, alpha=1.0, arc_budget=2)
    with pytest.raises(InvalidParameterError):
        _solve(tt, arc_budget=0)


def test_renderings_mention_stops():
    tt = risky_transfer("backup-chain")
    solution = _solve(tt, alpha=1.0)
    ctt = solution.timetable
    text = to_text(solution.graph, ctt)
    assert text.splitlines()[0].startswith("s 00:00:00 -> t")
    assert "BB3" in text
    dot = to_dot(solution.graph, ctt, compact=True)
    assert dot.startswith("digraph decision {")
    assert dot.rstrip().endswith("}")
    assert "doublecircle" in dot


# ==================== EVALUACIÓN INDEPENDIENTE ====================

@pytest.mark.parametrize("variant", ["simple", "backup-chain"])
def test_graph_evaluator_matches_scan(variant):
    tt = risky_transfer(variant)
    solution = _solve(tt)
    assert decision_graph_eat(solution.graph, solution.timetable, MODEL) == pytest.approx(
        solution.expected_arrival, abs=1e-6
    )


def test_graph_evaluator_on_random_instances():
    model = DelayModel(600)
    checked = 0
    for seed in range(6):
        tt = random_dag(stops=10, connections=150, seed=seed)
        for q in generate_queries(tt, 10, seed=seed):
            solution = solve_alpha_bounded(tt, q.source, q.time, q.target, 3.0, model)
            if solution is None:
                continue
            checked += 1
            value = decision_graph_eat(solution.graph, solution.timetable, model)
            assert value == pytest.approx(solution.expected_arrival, abs=1e-6)
            assert solution.expected_arrival <= solution.esat + max(
                model.expected(solution.timetable, c) for c in solution.timetable.connections
            ) + 1e-6
    assert checked > 0


@pytest.mark.parametrize("variant", ["simple", "backup-chain"])
def test_monte_carlo_agrees_with_expected_arrival(variant):
    tt = risky_transfer(variant)
    solution = _solve(tt)
    result = monte_carlo_eat(solution.timetable, solution.graph, MODEL, samples=100_000, seed=1)
    assert result.within(solution.expected_arrival, sigmas=4.0)


def test_monte_carlo_on_certain_chain():
    b = TimetableBuilder()
    for stop in ("s", "a", "t"):
        b.add_stop(stop, 0)
    b.add_run("r1", ["s", "a"], [(0, 10)])
    b.add_run("r2", ["a", "t"], [(70, 80)])
    tt = b.build()
    model = DelayModel(60)
    solution = solve_alpha_bounded(tt, tt.stop_id("s"), 0, tt.stop_id("t"), 1.0, model)
    result = monte_carlo_eat(solution.timetable, solution.graph, model, samples=50_000, seed=3)
    assert result.within(80 + expected_delay(0, 60), sigmas=4.0)


def test_monte_carlo_parameters():
    tt = risky_transfer("simple")
    solution = _solve(tt)
    with pytest.raises(InvalidParameterError):
        monte_carlo_eat(solution.timetable, solution.graph, MODEL, samples=1)


@pytest.mark.slow
def test_graph_evaluator_on_a_hundred_instances():
    model = DelayModel(600)
    instances = solved = 0
    for seed in range(50):
        tt = random_dag(stops=10, connections=150, seed=200 + seed)
        for q in generate_queries(tt, 2, seed=seed):
            instances += 1
            solution = solve_alpha_bounded(tt, q.source, q.time, q.target, 2.0, model)
            safe = esat(tt, q.source, q.time, q.target, model)
            assert (solution is None) == (safe is None), (seed, q)
            if solution is None:
                continue
            solved += 1
            value = decision_graph_eat(solution.graph, solution.timetable, model)
            assert value == pytest.approx(solution.expected_arrival, abs=1e-6)
    assert instances == 100
    assert solved > 0
