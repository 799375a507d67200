"""
Perfiles de mínimo número de transbordos dentro de una celda.

Para una conexión de salida c_t se recorren hacia atrás las conexiones de la
celda anteriores a ella. El valor de una conexión es el número mínimo de
transbordos para acabar sentado en c_t; cuando aparece una conexión de
entrada se extrae enseguida su viaje y se marcan sus subidas y bajadas.
"""

from bisect import bisect_left
from dataclasses import dataclass, field
from typing import AbstractSet, Dict, Iterable, Sequence, Set

from app.errors import InternalConsistencyError
from app.profile.store import StopProfile
from app.timetable.model import INFINITY, Timetable


@dataclass
class MinTransferResult:
    # conexiones de la celda usadas como subida o bajada
    marked: Set[int] = field(default_factory=set)
    # transbordos mínimos desde cada entrada que alcanza c_t
    transfers: Dict[int, int] = field(default_factory=dict)


def min_transfer_profiles(
    tt: Timetable,
    cell_stops: AbstractSet[int],
    connections: Sequence[int],
    exit_id: int,
    sources: Iterable[int],
) -> MinTransferResult:
    """
    Args:
        cell_stops: paradas de la celda
        connections: ids ordenados de la celda más las entradas
        exit_id: conexión c_t que sale de la celda
        sources: conexiones de entrada C_s
    """
    conns = tt.connections
    sources = set(sources)
    target = conns[exit_id]
    profiles: Dict[int, StopProfile] = {}

    def profile(stop: int) -> StopProfile:
        if stop not in profiles:
            profiles[stop] = StopProfile(INFINITY)
        return profiles[stop]

    trip_values: Dict[int, int] = {target.trip: 0}
    trip_exits: Dict[int, int] = {target.trip: exit_id}
    for f in tt.footpaths_in[target.dep_stop]:
        profile(f.dep_stop).insert_scalar(target.dep_time - f.dur, 0, exit_id, exit_id)

    result = MinTransferResult()
    for i in range(bisect_left(connections, exit_id) - 1, -1, -1):
        cid = connections[i]
        c = conns[cid]
        tau2 = trip_values.get(c.trip, INFINITY)
        tau3 = INFINITY
        if c.arr_stop in cell_stops and c.arr_stop in profiles:
            value = profiles[c.arr_stop].evaluate(c.arr_time)
            if value < INFINITY:
                tau3 = value + 1
        tau_c = min(tau2, tau3)
        if tau_c >= INFINITY:
            continue
        if tau_c < tau2:
            trip_values[c.trip] = tau_c
            trip_exits[c.trip] = cid

        if cid in sources and cid not in result.transfers:
            result.transfers[cid] = tau_c
            result.marked |= _extract_marks(tt, profiles, cid, trip_exits[c.trip], exit_id)
        if c.dep_stop in cell_stops:
            for f in tt.footpaths_in[c.dep_stop]:
                profile(f.dep_stop).insert_scalar(c.dep_time - f.dur, tau_c, cid, trip_exits[c.trip])

    result.marked = {cid for cid in result.marked if conns[cid].dep_stop in cell_stops}
    return result


def _extract_marks(
    tt: Timetable,
    profiles: Dict[int, StopProfile],
    source: int,
    first_exit: int,
    exit_id: int,
) -> Set[int]:
    conns = tt.connections
    marks = {source, first_exit}
    current = first_exit
    for _ in range(tt.num_connections):
        if current == exit_id:
            return marks
        e = conns[current]
        prof = profiles.get(e.arr_stop)
        if prof is None:
            break
        i = prof.evaluate_index(e.arr_time)
        enter, current = prof.enters[i], prof.exits[i]
        if enter < 0:
            break
        marks.add(enter)
        marks.add(current)
    raise InternalConsistencyError(
        f"el viaje de mínimo transbordo desde {source} no llega a {exit_id}"
    )
