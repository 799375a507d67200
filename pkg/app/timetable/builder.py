import logging
from typing import Dict, List, Optional, Sequence, Tuple

from app.errors import InvalidParameterError, InvalidStopError, TimetableConstraintError
from app.timetable.closure import close_footpaths
from app.timetable.model import Connection, Footpath, Stop, Timetable, Trip
from app.timetable.validation import validate

logger = logging.getLogger(__name__)


class TimetableBuilder:
    """Acumula registros y construye un Timetable ordenado y validado"""

    def __init__(self):
        self._stops: List[Tuple[str, int, Optional[str]]] = []
        self._stop_ids: Dict[str, int] = {}
        self._trips: List[str] = []
        self._trip_ids: Dict[str, int] = {}
        # (trip, dep_stop, arr_stop, dep_time, arr_time) en orden de entrada
        self._connections: List[Tuple[int, int, int, int, int]] = []
        self._footpaths: Dict[Tuple[int, int], int] = {}

    def add_stop(self, code: str, change_time: int, name: Optional[str] = None) -> int:
        if code in self._stop_ids:
            raise InvalidParameterError(f"parada duplicada: {code}")
        self._stop_ids[code] = len(self._stops)
        self._stops.append((code, int(change_time), name))
        return self._stop_ids[code]

    def add_trip(self, code: str) -> int:
        if code in self._trip_ids:
            raise InvalidParameterError(f"trip duplicado: {code}")
        self._trip_ids[code] = len(self._trips)
        self._trips.append(code)
        return self._trip_ids[code]

    def has_trip(self, code: str) -> bool:
        return code in self._trip_ids

    def stop(self, code: str) -> int:
        try:
            return self._stop_ids[code]
        except KeyError:
            raise InvalidStopError(code) from None

    def add_connection(self, trip: str, dep_stop: str, arr_stop: str, dep_time: int, arr_time: int) -> None:
        if trip not in self._trip_ids:
            raise InvalidParameterError(f"trip no declarado: {trip}")
        self._connections.append(
            (self._trip_ids[trip], self.stop(dep_stop), self.stop(arr_stop), int(dep_time), int(arr_time))
        )

    def add_run(self, trip: str, stops: Sequence[str], times: Sequence[Tuple[int, int]]) -> None:
        """Declara un trip completo; `times[i]` = (salida de stops[i], llegada a stops[i+1])"""
        self.add_trip(trip)
        for (dep, arr), a, b in zip(times, stops, stops[1:]):
            self.add_connection(trip, a, b, dep, arr)

    def add_footpath(self, dep_stop: str, arr_stop: str, dur: int) -> None:
        self._footpaths[(self.stop(dep_stop), self.stop(arr_stop))] = int(dur)

    def build(self, check: bool = True, synthesize_closure: bool = False) -> Timetable:
        changes = [change for _, change, _ in self._stops]
        explicit = dict(self._footpaths)
        # un lazo explícito fija el tiempo de cambio de la parada
        for (a, b), dur in list(explicit.items()):
            if a == b:
                changes[a] = dur
                del explicit[(a, b)]
        if synthesize_closure:
            changes, explicit = close_footpaths(changes, explicit)

        stops = [Stop(i, code, changes[i], name) for i, (code, _, name) in enumerate(self._stops)]

        order = sorted(range(len(self._connections)), key=lambda i: self._connections[i][3])
        connections = []
        members: List[List[int]] = [[] for _ in self._trips]
        for cid, raw in enumerate(order):
            trip, dep_stop, arr_stop, dep_time, arr_time = self._connections[raw]
            connections.append(Connection(cid, dep_stop, arr_stop, dep_time, arr_time, trip))
            members[trip].append(cid)
        trips = [Trip(i, code, tuple(members[i])) for i, code in enumerate(self._trips)]

        footpaths = [Footpath(s.id, s.id, s.change_time) for s in stops]
        footpaths.extend(Footpath(a, b, dur) for (a, b), dur in sorted(explicit.items()))

        tt = Timetable(stops, trips, connections, footpaths)
        if check:
            report = validate(tt)
            if not report.ok:
                raise TimetableConstraintError(report)
        logger.debug("horario construido: %r", tt)
        return tt
