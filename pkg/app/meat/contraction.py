"""
Contracción de caminatas para el modelo con retrasos.

Las paradas unidas por caminatas se funden en una sola. El tiempo de cambio
de la parada fundida es el mayor de sus miembros más la caminata interna más
larga; las conexiones que quedan dentro de un componente se descartan.
"""

import logging
from dataclasses import dataclass
from typing import Dict, Tuple

from app.timetable.builder import TimetableBuilder
from app.timetable.closure import footpath_components
from app.timetable.model import Timetable

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ContractedTimetable:
    timetable: Timetable
    # parada original → parada contraída
    component: Tuple[int, ...]
    members: Tuple[Tuple[int, ...], ...]
    # conexión contraída → conexión original
    original_connection: Tuple[int, ...]

    def stop(self, original_stop: int) -> int:
        return self.component[original_stop]


def contract_footpaths(tt: Timetable) -> ContractedTimetable:
    components = footpath_components(tt)
    component = [0] * tt.num_stops
    for idx, members in enumerate(components):
        for stop in members:
            component[stop] = idx

    internal: Dict[int, int] = {}
    for f in tt.footpaths:
        if not f.is_loop:
            idx = component[f.dep_stop]
            internal[idx] = max(internal.get(idx, 0), f.dur)

    builder = TimetableBuilder()
    codes = []
    for idx, members in enumerate(components):
        code = "+".join(tt.stops[s].code for s in members)
        change = max(tt.change_time(s) for s in members) + internal.get(idx, 0)
        name = tt.stops[members[0]].name if len(members) == 1 else None
        builder.add_stop(code, change, name)
        codes.append(code)

    kept = []
    for c in tt.connections:
        a, b = component[c.dep_stop], component[c.arr_stop]
        if a == b:
            continue
        trip_code = tt.trips[c.trip].code
        if not builder.has_trip(trip_code):
            builder.add_trip(trip_code)
        builder.add_connection(trip_code, codes[a], codes[b], c.dep_time, c.arr_time)
        kept.append(c.id)

    contracted = builder.build()
    logger.debug(
        "contracción: %d paradas → %d, %d conexiones descartadas",
        tt.num_stops, contracted.num_stops, tt.num_connections - len(kept),
    )
    return ContractedTimetable(
        contracted,
        tuple(component),
        tuple(tuple(m) for m in components),
        tuple(kept),
    )
