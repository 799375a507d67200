import pytest

from app.errors import InvalidParameterError, InvalidStopError, TimetableConstraintError, TimetableParseError
from app.timetable.builder import TimetableBuilder
from app.timetable.clock import format_clock, parse_clock
from app.timetable.loader import dump_timetable, load_timetable, timetable_hash
from app.timetable.model import INFINITY, build_aux_indexes, transfer_reachable
from app.timetable.validation import validate


def _describe(tt):
    return [
        (tt.stops[c.dep_stop].code, c.dep_time, tt.stops[c.arr_stop].code) for c in tt.connections
    ]


def test_hops_sorted_order(hops):
    assert hops.num_stops == 5
    assert hops.num_connections == 7
    assert _describe(hops) == [
        ("s", 5, "t"),
        ("s", 6, "x"),
        ("s", 7, "z"),
        ("x", 8, "y"),
        ("z", 9, "t"),
        ("x", 9, "t"),
        ("y", 10, "t"),
    ]
    assert [c.id for c in hops.connections] == list(range(7))


def test_hops_is_valid(hops):
    assert validate(hops).ok


def test_every_stop_gets_loop_with_change_time():
    b = TimetableBuilder()
    b.add_stop("a", 120)
    b.add_stop("b", 45)
    b.add_run("r1", ["a", "b"], [(0, 60)])
    tt = b.build()
    loops = {f.dep_stop: f.dur for f in tt.footpaths if f.is_loop}
    assert loops == {tt.stop_id("a"): 120, tt.stop_id("b"): 45}


def test_explicit_loop_overrides_change_time():
    tt = load_timetable("S a 120\nS b 0\nT r\nC r a b 0 10\nF a a 30\n")
    assert tt.change_time(tt.stop_id("a")) == 30


def test_connection_with_dep_not_before_arr_is_rejected():
    with pytest.raises(TimetableConstraintError) as exc:
        load_timetable("S a 0\nS b 0\nT r\nC r a b 10 10\n")
    assert "connection-times" in exc.value.report.kinds()


def test_broken_trip_is_reported():
    text = "S a 0\nS b 0\nS c 0\nT r\nC r a b 0 10\nC r c a 20 30\n"
    with pytest.raises(TimetableConstraintError) as exc:
        load_timetable(text)
    assert "trip-ordering" in exc.value.report.kinds()


def test_missing_closure_is_reported_and_synthesized():
    text = "S a 0\nS b 0\nS c 0\nT r\nC r a b 0 10\nF a b 60\nF b c 60\n"
    with pytest.raises(TimetableConstraintError) as exc:
        load_timetable(text)
    assert "closure" in exc.value.report.kinds()

    tt = load_timetable(text, synthesize_closure=True)
    assert tt.footpath_duration(tt.stop_id("a"), tt.stop_id("c")) == 120


def test_closure_respects_triangle_inequality():
    text = "S a 0\nS b 0\nS c 0\nT r\nC r a b 0 10\nF a b 60\nF b c 60\nF a c 500\n"
    with pytest.raises(TimetableConstraintError) as exc:
        load_timetable(text)
    assert "triangle" in exc.value.report.kinds()
    tt = load_timetable(text, synthesize_closure=True)
    assert tt.footpath_duration(tt.stop_id("a"), tt.stop_id("c")) == 120


def test_parse_errors_carry_line_number():
    with pytest.raises(TimetableParseError) as exc:
        load_timetable("S a 0\nS b zero\n")
    assert exc.value.line_no == 2

    with pytest.raises(TimetableParseError):
        load_timetable("S a 0\nX a b\n")

    with pytest.raises(TimetableParseError) as exc:
        load_timetable("S a 0\nT r\nC r a nowhere 0 10\n")
    assert exc.value.line_no == 3


def test_duplicate_stop_is_rejected():
    b = TimetableBuilder()
    b.add_stop("a", 0)
    with pytest.raises(InvalidParameterError):
        b.add_stop("a", 0)


def test_stop_lookup(hops):
    assert hops.stops[hops.stop_id("z")].code == "z"
    with pytest.raises(InvalidStopError):
        hops.stop_id("nowhere")
    with pytest.raises(InvalidStopError):
        hops.check_stop(99)


def test_stop_names_survive_dump(hops):
    tt = load_timetable("S a 0 Plaza Mayor\nS b 0\nT r\nC r a b 0 10\n")
    assert tt.stops[tt.stop_id("a")].label == "Plaza Mayor"
    again = load_timetable(dump_timetable(tt))
    assert again.stops[again.stop_id("a")].name == "Plaza Mayor"
    assert timetable_hash(load_timetable(dump_timetable(hops))) == timetable_hash(hops)


def test_aux_indexes_on_hops(hops):
    aux = build_aux_indexes(hops)
    xy = hops.trip_id("xy")
    assert len(aux.connections_by_trip[xy]) == 1
    assert hops.connections[aux.connections_by_trip[xy][0]].dep_time == 8

    t = hops.stop_id("t")
    arrivals = [hops.connections[cid].arr_time for cid in aux.connections_by_arrival[t]]
    assert arrivals == [11, 12, 13, 14]
    assert aux.arriving_at(t, 12) == (4,)
    assert aux.departing_at(hops.stop_id("x"), 9) == [5]


def test_transfer_reachable_uses_single_footpath():
    tt = load_timetable("S a 0\nS b 0\nT r\nC r a b 0 10\nF a b 60\nF b a 60\n")
    a, b = tt.stop_id("a"), tt.stop_id("b")
    assert transfer_reachable(tt, a, 100, b, 160)
    assert not transfer_reachable(tt, a, 100, b, 159)
    assert transfer_reachable(tt, a, 100, a, 100)


def test_clock_parsing():
    assert parse_clock("08:00") == 8 * 3600
    assert parse_clock("25:10:05") == 25 * 3600 + 10 * 60 + 5
    assert parse_clock("90") == 90
    with pytest.raises(InvalidParameterError):
        parse_clock("8h")
    with pytest.raises(InvalidParameterError):
        parse_clock("08:75")
    assert format_clock(3661) == "01:01:01"
    assert format_clock(INFINITY) == "∞"
