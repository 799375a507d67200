from typing import Optional

from app.ea.journey import Journey, Leg
from app.ea.state import EaScanState
from app.errors import InternalConsistencyError
from app.timetable.model import AuxIndexes, Timetable, is_infinite


def extract_journey_stateless(
    tt: Timetable,
    aux: AuxIndexes,
    state: EaScanState,
    s: int,
    tau: int,
    t: int,
) -> Optional[Journey]:
    """
    Extrae un viaje óptimo sin punteros, generándolos al vuelo.

    Usa las llegadas S y el registro de trips T del escaneo previo: para cada
    caminata que entra en la parada actual busca conexiones que lleguen justo
    a tiempo, descarta las de trips no alcanzados y toma como entrada la
    primera conexión alcanzable del trip.
    """
    if is_infinite(state.arrival(t)):
        return None
    conns = tt.connections
    legs, footpaths = [], []
    x = t
    while True:
        target_time = state.arrival(x)
        direct = tt.footpath(s, x)
        if direct is not None and tau + direct.dur == target_time:
            footpaths.append(direct)
            break

        found = None
        for f in tt.footpaths_in[x]:
            for cid in aux.arriving_at(f.dep_stop, target_time - f.dur):
                first = state.trip_entry(conns[cid].trip)
                if first is None:
                    continue
                trip = aux.connections_by_trip[conns[cid].trip]
                for pos in range(tt.trip_position[first], tt.trip_position[cid] + 1):
                    enter = conns[trip[pos]]
                    if state.arrival(enter.dep_stop) <= enter.dep_time:
                        found = (enter.id, cid, f)
                        break
                if found:
                    break
            if found:
                break
        if found is None:
            raise InternalConsistencyError(f"ningún candidato explica la llegada a {x} en {target_time}")
        enter_id, exit_id, final = found
        legs.append(Leg(enter_id, exit_id))
        footpaths.append(final)
        x = conns[enter_id].dep_stop

    legs.reverse()
    footpaths.reverse()
    return Journey.build(tt, footpaths, legs, source_time=tau)
