"""
Connection Scan de llegada más temprana.

Las tres optimizaciones (criterio de inicio, criterio de parada y caminata
limitada) solo podan trabajo; el resultado no depende de ellas.
"""

import logging
from bisect import bisect_left
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Tuple, Union

from app.ea.journey import Journey, JourneyPointer, Leg
from app.ea.state import EaScanState
from app.errors import InternalConsistencyError
from app.timetable.model import Timetable, is_infinite

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class EaOptions:
    start_criterion: bool = True
    stop_criterion: bool = True
    limited_walking: bool = True
    # sigue escaneando tras el criterio de parada y comprueba que S[t] no cambia
    verify_stop_criterion: bool = False


DEFAULT_OPTIONS = EaOptions()


@dataclass
class EaScanResult:
    source: int
    source_time: int
    target: Optional[int]
    arrival: Optional[int]
    scanned: int
    state: EaScanState


def _connection_stream(
    tt: Timetable,
    tau: int,
    start_criterion: bool,
    connections: Union[None, Sequence[int], Iterable[int]],
) -> Iterable[int]:
    if connections is None:
        start = tt.first_departing_at_or_after(tau) if start_criterion else 0
        return range(start, tt.num_connections)
    if isinstance(connections, Sequence):
        start = 0
        if start_criterion:
            start = bisect_left(connections, tau, key=lambda cid: tt.connections[cid].dep_time)
        return (connections[i] for i in range(start, len(connections)))
    # iterador perezoso (fusión k-way del overlay): ya empieza en τ
    return connections


def scan_earliest_arrival(
    tt: Timetable,
    s: int,
    tau: int,
    t: Optional[int] = None,
    opts: EaOptions = DEFAULT_OPTIONS,
    state: Optional[EaScanState] = None,
    connections: Union[None, Sequence[int], Iterable[int]] = None,
    pointers: bool = False,
    until: Optional[int] = None,
) -> EaScanResult:
    """
    Escanea conexiones en orden de salida desde (s, τ).

    Args:
        t: parada destino; None para una consulta uno-a-todos
        connections: subconjunto ordenado de ids (o iterador perezoso); None = todas
        pointers: guarda punteros de viaje J
        until: deja de escanear al encontrar una salida posterior a este instante
    """
    tt.check_stop(s)
    if t is not None:
        tt.check_stop(t)
    if state is None:
        state = EaScanState.for_timetable(tt)
    else:
        state.reset()

    for f in tt.footpaths_out[s]:
        value = tau + f.dur
        if value < state.arrival(f.arr_stop):
            state.set_arrival(f.arr_stop, value)

    conns = tt.connections
    stop_crit = opts.stop_criterion and t is not None
    stopped_at: Optional[int] = None
    scanned = 0
    for cid in _connection_stream(tt, tau, opts.start_criterion, connections):
        c = conns[cid]
        if until is not None and c.dep_time > until:
            break
        if stop_crit and stopped_at is None and state.arrival(t) <= c.dep_time:
            if not opts.verify_stop_criterion:
                break
            stopped_at = state.arrival(t)
        if stopped_at is None:
            scanned += 1
        entry = state.trip_entry(c.trip)
        if entry is None:
            if state.arrival(c.dep_stop) > c.dep_time:
                continue
            state.set_trip_entry(c.trip, cid)
            entry = cid
        if opts.limited_walking and c.arr_time >= state.arrival(c.arr_stop):
            continue
        for f in tt.footpaths_out[c.arr_stop]:
            value = c.arr_time + f.dur
            if value < state.arrival(f.arr_stop):
                state.set_arrival(f.arr_stop, value)
                if pointers:
                    state.set_pointer(f.arr_stop, JourneyPointer(entry, cid, f))

    if stopped_at is not None and state.arrival(t) != stopped_at:
        raise InternalConsistencyError(
            f"criterio de parada: S[t] pasó de {stopped_at} a {state.arrival(t)}"
        )

    arrival = None
    if t is not None and not is_infinite(state.arrival(t)):
        arrival = state.arrival(t)
    logger.debug("EA %s@%s → %s: %d conexiones escaneadas", s, tau, t, scanned)
    return EaScanResult(s, tau, t, arrival, scanned, state)


def earliest_arrival(
    tt: Timetable,
    s: int,
    tau: int,
    t: int,
    opts: EaOptions = DEFAULT_OPTIONS,
    state: Optional[EaScanState] = None,
) -> Optional[int]:
    """Hora de llegada más temprana a t saliendo de s no antes de τ; None si no hay viaje"""
    return scan_earliest_arrival(tt, s, tau, t, opts, state).arrival


def reconstruct_journey(tt: Timetable, state: EaScanState, s: int, tau: int, t: int) -> Journey:
    """Recorre J desde t hacia atrás y antepone la caminata inicial"""
    legs, footpaths = [], []
    x = t
    while (pointer := state.pointer(x)) is not None:
        legs.append(Leg(pointer.enter, pointer.exit))
        footpaths.append(pointer.final_footpath)
        x = tt.connections[pointer.enter].dep_stop
    initial = tt.footpath(s, x)
    if initial is None:
        raise InternalConsistencyError(f"sin caminata inicial de {s} a {x}")
    footpaths.append(initial)
    legs.reverse()
    footpaths.reverse()
    return Journey.build(tt, footpaths, legs, source_time=tau)


def earliest_arrival_with_pointers(
    tt: Timetable,
    s: int,
    tau: int,
    t: int,
    opts: EaOptions = DEFAULT_OPTIONS,
) -> Optional[Tuple[int, Journey]]:
    result = scan_earliest_arrival(tt, s, tau, t, opts, pointers=True)
    if result.arrival is None:
        return None
    return result.arrival, reconstruct_journey(tt, result.state, s, tau, t)
