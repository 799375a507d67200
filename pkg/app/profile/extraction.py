"""
Extracción de viajes desde un perfil ya calculado.

Sin punteros, cada tramo se reconstruye buscando una conexión que salga a la
hora de la entrada del perfil y cuyo trip alcance el valor esperado en alguna
bajada posterior. Con punteros se leen directamente las conexiones de subida y
bajada guardadas en cada entrada.
"""

import logging
from typing import List, Optional, Tuple

from app.ea.journey import Journey, Leg
from app.errors import InternalConsistencyError, InvalidParameterError
from app.profile.store import ProfileStore
from app.profile.vectors import vector_shift
from app.timetable.model import INFINITY, AuxIndexes, Footpath, Timetable

logger = logging.getLogger(__name__)


class _Cursor:
    """Lee un perfil escalar o la componente ℓ de uno de Pareto"""

    def __init__(self, store: ProfileStore):
        self.store = store
        self.encoding = store.encoding
        self.walk = store.walk_sources()

    def component(self, value, legs: Optional[int]) -> int:
        if legs is None:
            return value
        return int(value[legs - 1])

    def arrival(self, value: int, legs: Optional[int]) -> int:
        return value if legs is not None else self.encoding.arrival(value)

    def entry(self, stop: int, tau: int, legs: Optional[int]) -> Tuple[int, int]:
        profile = self.store.profiles[stop]
        i = profile.evaluate_index(tau)
        target = self.component(profile.arrs[i], legs)
        if legs is not None:
            # la componente pudo heredarse de una entrada posterior
            while i > 1 and self.component(profile.arrs[i - 1], legs) == target:
                i -= 1
        return i, target

    def walk_value(self, stop: int, arr_time: int) -> int:
        dur = self.walk.get(stop)
        if dur is None:
            return INFINITY
        if self.store.is_pareto:
            return arr_time + dur
        return self.encoding.encode(arr_time + dur, 1)

    def exit_options(self, stop: int, arr_time: int, legs: Optional[int]) -> List[Tuple[int, Optional[int]]]:
        """
        Valores posibles al bajar en `stop`: pares (valor, tramos restantes),
        con tramos restantes None cuando se camina al destino.
        """
        options = [(self.walk_value(stop, arr_time), None)]
        value = self.store.profiles[stop].evaluate(arr_time)
        if legs is None:
            options.append((self.encoding.add_leg(value), -1))
            return options
        if legs >= 2:
            options.append((int(value[legs - 2]), legs - 1))
        if self.store.modified_shift and legs == self.store.leg_max:
            options.append((int(value[legs - 1]), legs))
        return options

    def trip_value(self, trip: int, legs: Optional[int]) -> int:
        return self.component(self.store.trip_values[trip], legs)


def _final_footpath(tt: Timetable, store: ProfileStore, stop: int, dur: int) -> Footpath:
    known = tt.footpath(stop, store.target)
    if known is not None and known.dur == dur:
        return known
    return Footpath(stop, store.target, dur)


def _find_leg(
    tt: Timetable,
    aux: AuxIndexes,
    cursor: _Cursor,
    x: int,
    dep: int,
    target: int,
    legs: Optional[int],
) -> Tuple[Footpath, Leg, Optional[int], bool]:
    """Busca subida y bajada que realicen `target` saliendo de x a la hora `dep`"""
    conns = tt.connections
    for f in tt.footpaths_out[x]:
        for cid in aux.departing_at(f.arr_stop, dep + f.dur):
            c = conns[cid]
            if cursor.trip_value(c.trip, legs) > target:
                continue
            trip_conns = aux.connections_by_trip[c.trip]
            pos = tt.trip_position[cid]
            for exit_id in reversed(trip_conns[pos:]):
                e = conns[exit_id]
                for value, next_legs in cursor.exit_options(e.arr_stop, e.arr_time, legs):
                    if value <= target:
                        return f, Leg(cid, exit_id), next_legs, next_legs is None
    raise InternalConsistencyError(f"ninguna conexión realiza el valor {target} desde la parada {x}")


def _pointer_leg(
    tt: Timetable,
    cursor: _Cursor,
    x: int,
    index: int,
    target: int,
    legs: Optional[int],
) -> Tuple[Footpath, Leg, Optional[int], bool]:
    profile = cursor.store.profiles[x]
    enter = cursor.component(profile.enters[index], legs)
    exit_id = cursor.component(profile.exits[index], legs)
    if enter < 0 or exit_id < 0:
        raise InternalConsistencyError(f"entrada sin punteros en la parada {x}")
    f = tt.footpath(x, tt.connections[enter].dep_stop)
    if f is None:
        raise InternalConsistencyError(f"sin caminata de {x} a la subida {enter}")
    e = tt.connections[exit_id]
    for value, next_legs in cursor.exit_options(e.arr_stop, e.arr_time, legs):
        if value <= target:
            return f, Leg(enter, exit_id), next_legs, next_legs is None
    raise InternalConsistencyError(f"la bajada {exit_id} no realiza el valor {target}")


def extract_profile_journey(
    tt: Timetable,
    aux: Optional[AuxIndexes],
    store: ProfileStore,
    s: int,
    tau_s: int,
    legs: Optional[int] = None,
    use_pointers: bool = False,
) -> Optional[Journey]:
    """
    Viaje óptimo desde (s, τs) hacia el destino del perfil.

    En perfiles de Pareto `legs` elige la componente (máximo de tramos); por
    defecto la última. Devuelve None si el destino no es alcanzable.
    """
    tt.check_stop(s)
    if store.is_pareto:
        legs = store.leg_max if legs is None else legs
        if not 1 <= legs <= store.leg_max:
            raise InvalidParameterError(f"tramos fuera de [1, {store.leg_max}]: {legs}")
    else:
        legs = None
    if aux is None and not use_pointers:
        raise InvalidParameterError("la extracción sin punteros necesita los índices auxiliares")

    cursor = _Cursor(store)
    index, target = cursor.entry(s, tau_s, legs)
    walk_dur = cursor.walk.get(s)
    if walk_dur is not None and (target >= INFINITY or tau_s + walk_dur <= cursor.arrival(target, legs)):
        return Journey.build(tt, [_final_footpath(tt, store, s, walk_dur)], [], source_time=tau_s)
    if target >= INFINITY:
        return None

    footpaths: List[Footpath] = []
    journey_legs: List[Leg] = []
    x = s
    for _ in range(tt.num_connections + 1):
        dep = store.profiles[x].deps[index]
        if use_pointers:
            f, leg, next_legs, done = _pointer_leg(tt, cursor, x, index, target, legs)
        else:
            f, leg, next_legs, done = _find_leg(tt, aux, cursor, x, dep, target, legs)
        footpaths.append(f)
        journey_legs.append(leg)
        e = tt.connections[leg.exit]
        if done:
            footpaths.append(_final_footpath(tt, store, e.arr_stop, cursor.walk[e.arr_stop]))
            return Journey.build(tt, footpaths, journey_legs)
        if next_legs != -1:
            legs = next_legs
        x = e.arr_stop
        index, target = cursor.entry(x, e.arr_time, legs)
    raise InternalConsistencyError("la extracción no termina")
