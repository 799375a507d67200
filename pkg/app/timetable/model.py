"""
Modelo de datos del horario: paradas, conexiones, trenes (trips) y caminatas.

Las conexiones se guardan ordenadas por hora de salida; el id de cada conexión
es su posición en ese arreglo, así que el orden global de desempate es el orden
de los ids.
"""

from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from app.errors import InvalidStopError

# Tiempo infinito para marcas enteras (segundos)
INFINITY = 1 << 62


def is_infinite(value: int) -> bool:
    return value >= INFINITY


@dataclass(frozen=True, slots=True)
class Stop:
    id: int
    code: str
    change_time: int
    name: Optional[str] = None

    @property
    def label(self) -> str:
        return self.name or self.code


@dataclass(frozen=True, slots=True)
class Connection:
    id: int
    dep_stop: int
    arr_stop: int
    dep_time: int
    arr_time: int
    trip: int


@dataclass(frozen=True, slots=True)
class Footpath:
    dep_stop: int
    arr_stop: int
    dur: int

    @property
    def is_loop(self) -> bool:
        return self.dep_stop == self.arr_stop


@dataclass(frozen=True, slots=True)
class Trip:
    id: int
    code: str
    connections: Tuple[int, ...]


class Timetable:
    """Horario inmutable; se comparte sin copia entre consultas concurrentes"""

    def __init__(
        self,
        stops: Sequence[Stop],
        trips: Sequence[Trip],
        connections: Sequence[Connection],
        footpaths: Sequence[Footpath],
    ):
        self.stops: Tuple[Stop, ...] = tuple(stops)
        self.trips: Tuple[Trip, ...] = tuple(trips)
        self.connections: Tuple[Connection, ...] = tuple(connections)
        self.footpaths: Tuple[Footpath, ...] = tuple(footpaths)

        out: List[List[Footpath]] = [[] for _ in self.stops]
        inc: List[List[Footpath]] = [[] for _ in self.stops]
        self._footpath: Dict[Tuple[int, int], Footpath] = {}
        for f in self.footpaths:
            out[f.dep_stop].append(f)
            inc[f.arr_stop].append(f)
            self._footpath[(f.dep_stop, f.arr_stop)] = f
        self.footpaths_out: Tuple[Tuple[Footpath, ...], ...] = tuple(tuple(fs) for fs in out)
        self.footpaths_in: Tuple[Tuple[Footpath, ...], ...] = tuple(tuple(fs) for fs in inc)

        self.dep_times: List[int] = [c.dep_time for c in self.connections]
        # posición de cada conexión dentro de su trip
        self.trip_position: List[int] = [0] * len(self.connections)
        for trip in self.trips:
            for pos, cid in enumerate(trip.connections):
                self.trip_position[cid] = pos

        self._stop_index = {s.code: s.id for s in self.stops}
        self._trip_index = {tr.code: tr.id for tr in self.trips}

    def __repr__(self) -> str:
        return (
            f"Timetable(stops={len(self.stops)}, trips={len(self.trips)}, "
            f"connections={len(self.connections)}, footpaths={len(self.footpaths)})"
        )

    @property
    def num_stops(self) -> int:
        return len(self.stops)

    @property
    def num_trips(self) -> int:
        return len(self.trips)

    @property
    def num_connections(self) -> int:
        return len(self.connections)

    def stop_id(self, code: str) -> int:
        """Id denso de una parada a partir de su código textual"""
        try:
            return self._stop_index[code]
        except KeyError:
            raise InvalidStopError(code) from None

    def trip_id(self, code: str) -> int:
        return self._trip_index[code]

    def check_stop(self, stop: int) -> int:
        if not isinstance(stop, int) or stop < 0 or stop >= len(self.stops):
            raise InvalidStopError(stop)
        return stop

    def resolve_stop(self, stop) -> int:
        """Acepta un id o un código de parada"""
        if isinstance(stop, str):
            return self.stop_id(stop)
        return self.check_stop(stop)

    def change_time(self, stop: int) -> int:
        return self.stops[stop].change_time

    def footpath(self, dep_stop: int, arr_stop: int) -> Optional[Footpath]:
        return self._footpath.get((dep_stop, arr_stop))

    def footpath_duration(self, dep_stop: int, arr_stop: int) -> Optional[int]:
        f = self._footpath.get((dep_stop, arr_stop))
        return None if f is None else f.dur

    def first_departing_at_or_after(self, tau: int) -> int:
        return bisect_left(self.dep_times, tau)

    def last_departing_at_or_before(self, tau: int) -> int:
        return bisect_right(self.dep_times, tau) - 1

    def describe_connection(self, cid: int) -> str:
        c = self.connections[cid]
        return (
            f"C {self.trips[c.trip].code} {self.stops[c.dep_stop].code} "
            f"{self.stops[c.arr_stop].code} {c.dep_time} {c.arr_time}"
        )


def transfer_reachable(tt: Timetable, a: int, tau_a: int, b: int, tau_b: int) -> bool:
    """Regla de una sola arista: existe una caminata a→b con τb − τa ≥ dur"""
    dur = tt.footpath_duration(a, b)
    return dur is not None and tau_b - tau_a >= dur


@dataclass(frozen=True)
class AuxIndexes:
    connections_by_trip: Tuple[Tuple[int, ...], ...]
    connections_by_arrival: Tuple[Tuple[int, ...], ...]
    arrival_times: Tuple[Tuple[int, ...], ...]
    connections_by_departure: Tuple[Tuple[Tuple[int, int], ...], ...]

    def arriving_at(self, stop: int, time: int) -> Tuple[int, ...]:
        """Conexiones que llegan a `stop` exactamente a la hora `time`"""
        times = self.arrival_times[stop]
        lo = bisect_left(times, time)
        hi = bisect_right(times, time)
        return self.connections_by_arrival[stop][lo:hi]

    def departing_at(self, stop: int, time: int) -> List[int]:
        entries = self.connections_by_departure[stop]
        lo = bisect_left(entries, (time, -1))
        result = []
        for dep_time, cid in entries[lo:]:
            if dep_time != time:
                break
            result.append(cid)
        return result


def build_aux_indexes(tt: Timetable) -> AuxIndexes:
    by_arrival: List[List[int]] = [[] for _ in tt.stops]
    by_departure: List[List[Tuple[int, int]]] = [[] for _ in tt.stops]
    for c in tt.connections:
        by_arrival[c.arr_stop].append(c.id)
        by_departure[c.dep_stop].append((c.dep_time, c.id))

    arrivals = []
    for ids in by_arrival:
        ids.sort(key=lambda cid: (tt.connections[cid].arr_time, cid))
        arrivals.append(tuple(tt.connections[cid].arr_time for cid in ids))
    for entries in by_departure:
        entries.sort()

    return AuxIndexes(
        connections_by_trip=tuple(trip.connections for trip in tt.trips),
        connections_by_arrival=tuple(tuple(ids) for ids in by_arrival),
        arrival_times=tuple(arrivals),
        connections_by_departure=tuple(tuple(e) for e in by_departure),
    )
