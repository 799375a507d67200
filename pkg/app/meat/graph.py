"""
Grafos de decisión: qué tren tomar en cada parada según la hora real de
llegada.

La extracción recorre las conexiones por hora de salida con una cola de
prioridad. Cada conexión sacada se prolonga por su trip mientras el valor
esperado no cambie; desde la parada de bajada se encolan las entradas del
perfil que cubren la ventana de retraso.
"""

import heapq
import logging
import math
from bisect import bisect_left
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from app.ea.journey import Leg
from app.errors import InvalidDecisionGraphError
from app.meat.delay import DelayModel
from app.meat.scan import EatProfileStore
from app.timetable.clock import format_clock
from app.timetable.model import Timetable

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DecisionGraph:
    source: int
    target: int
    source_time: int
    legs: Tuple[Leg, ...]
    # e(G) según la fase 1
    expected_arrival: float
    max_arr_time: int
    # False si la ventana κ dejó fuera continuaciones con probabilidad positiva
    complete: bool = True
    kappa: Optional[int] = None

    @property
    def arc_count(self) -> int:
        return len(self.legs)

    def first_leg(self, tt: Timetable) -> Leg:
        from_source = [leg for leg in self.legs if tt.connections[leg.enter].dep_stop == self.source]
        return min(from_source, key=lambda leg: (tt.connections[leg.enter].dep_time, leg.enter))

    def stops(self, tt: Timetable) -> List[int]:
        seen = {self.source, self.target}
        for leg in self.legs:
            seen.add(tt.connections[leg.enter].dep_stop)
            seen.add(tt.connections[leg.exit].arr_stop)
        return sorted(seen)

    def departures(self, tt: Timetable) -> Dict[int, List[Leg]]:
        """Tramos de cada parada ordenados por hora de salida"""
        by_stop: Dict[int, List[Leg]] = defaultdict(list)
        for leg in self.legs:
            by_stop[tt.connections[leg.enter].dep_stop].append(leg)
        for legs in by_stop.values():
            legs.sort(key=lambda leg: (tt.connections[leg.enter].dep_time, leg.enter))
        return dict(by_stop)


def _ride(store: EatProfileStore, cid: int) -> int:
    """Última conexión del trip antes de que cambie el valor esperado"""
    tt = store.tt
    values = store.connection_values
    trip = tt.trips[tt.connections[cid].trip].connections
    value = values[cid]
    pos = tt.trip_position[cid]
    while pos + 1 < len(trip) and values[trip[pos + 1]] == value:
        pos += 1
    return trip[pos]


def extract_decision_graph(
    store: EatProfileStore,
    s: int,
    tau_s: int,
    kappa: Optional[int] = None,
) -> Optional[DecisionGraph]:
    """
    Grafo de decisión desde (s, τs) hacia el destino del perfil.

    Args:
        kappa: ventana de visualización en segundos; None usa max_D de cada
            bajada y reproduce el grafo completo, 0 deja un solo camino
    """
    tt = store.tt
    tt.check_stop(s)
    profile = store.profiles[s]
    i = profile.first_index_at_or_after(tau_s)
    if i < 0:
        return None

    conns = tt.connections
    first = profile.conns[i]
    heap = [(conns[first].dep_time, first)]
    queued = {first}
    legs: List[Leg] = []
    complete = True
    max_arr = 0
    while heap:
        _, cid = heapq.heappop(heap)
        exit_id = _ride(store, cid)
        legs.append(Leg(cid, exit_id))
        e = conns[exit_id]
        if e.arr_stop == store.target:
            max_arr = max(max_arr, e.arr_time)
            continue
        max_d = store.model.max_delay_of(tt, e)
        max_arr = max(max_arr, e.arr_time + max_d)
        window = max_d if kappa is None else kappa
        options = store.continuation(exit_id)
        taken = 0
        for dep, _, option, _ in options:
            taken += 1
            if option not in queued:
                queued.add(option)
                heapq.heappush(heap, (dep, option))
            if dep - e.arr_time >= window:
                break
        if taken < len(options):
            complete = False

    legs.sort(key=lambda leg: (conns[leg.enter].dep_time, leg.enter))
    graph = DecisionGraph(
        source=s,
        target=store.target,
        source_time=tau_s,
        legs=tuple(legs),
        expected_arrival=profile.eats[i],
        max_arr_time=max_arr,
        complete=complete,
        kappa=kappa,
    )
    logger.debug("grafo de decisión %s → %s: %d tramos", s, store.target, len(legs))
    return graph


def decision_graph_eat(graph: DecisionGraph, tt: Timetable, model: DelayModel) -> float:
    """
    Evalúa e(G) de nuevo, sin mirar los perfiles: cada tramo vale la media de
    los tramos que salen de su parada de bajada ponderada por la probabilidad
    de alcanzarlos.
    """
    if not graph.complete:
        raise InvalidDecisionGraphError("el grafo se recortó con una ventana κ: no cubre todos los retrasos")
    if not graph.legs:
        raise InvalidDecisionGraphError("grafo sin tramos")
    conns = tt.connections
    departures = graph.departures(tt)
    dep_times = {stop: [conns[leg.enter].dep_time for leg in legs] for stop, legs in departures.items()}

    values: Dict[Leg, float] = {}
    for leg in sorted(graph.legs, key=lambda leg: conns[leg.enter].dep_time, reverse=True):
        e = conns[leg.exit]
        if e.arr_stop == graph.target:
            values[leg] = e.arr_time + model.expected(tt, e)
            continue
        candidates = departures.get(e.arr_stop, [])
        start = bisect_left(dep_times.get(e.arr_stop, []), e.arr_time)
        terms = []
        previous = 0.0
        for nxt in candidates[start:]:
            p = model.transfer_probability(tt, e, conns[nxt.enter].dep_time - e.arr_time)
            weight = p - previous
            if weight > 0:
                terms.append(weight * values[nxt])
                previous = p
            if p >= 1.0:
                break
        if previous < 1.0:
            raise InvalidDecisionGraphError(
                f"tras {tt.describe_connection(e.id)} no hay continuación segura (P = {previous:.3f})"
            )
        values[leg] = math.fsum(terms)
    return values[graph.first_leg(tt)]


@dataclass(frozen=True)
class CompactArc:
    stop: int
    first_dep: int
    last_dep: int
    destination: int
    legs: int = 1


@dataclass(frozen=True)
class CompactDecisionGraph:
    source: int
    target: int
    # horas de salida de cada parada
    slots: Dict[int, Tuple[int, ...]] = field(default_factory=dict)
    arcs: Tuple[CompactArc, ...] = ()

    @property
    def arc_count(self) -> int:
        return len(self.arcs)


def compact_representation(graph: DecisionGraph, tt: Timetable) -> CompactDecisionGraph:
    """Agrupa por parada las salidas y funde las consecutivas hacia el mismo destino"""
    conns = tt.connections
    slots: Dict[int, Tuple[int, ...]] = {}
    arcs: List[CompactArc] = []
    for stop, legs in sorted(graph.departures(tt).items()):
        slots[stop] = tuple(sorted({conns[leg.enter].dep_time for leg in legs}))
        current: Optional[CompactArc] = None
        for leg in legs:
            dep = conns[leg.enter].dep_time
            destination = conns[leg.exit].arr_stop
            if current is not None and current.destination == destination:
                current = CompactArc(stop, current.first_dep, dep, destination, current.legs + 1)
                continue
            if current is not None:
                arcs.append(current)
            current = CompactArc(stop, dep, dep, destination)
        if current is not None:
            arcs.append(current)
    return CompactDecisionGraph(graph.source, graph.target, slots, tuple(arcs))


def _slot_label(arc: CompactArc) -> str:
    if arc.first_dep == arc.last_dep:
        return format_clock(arc.first_dep)
    return f"{format_clock(arc.first_dep)}-{format_clock(arc.last_dep)} ({arc.legs})"


def to_text(graph: DecisionGraph, tt: Timetable, compact: bool = False) -> str:
    stops = tt.stops
    lines = [
        f"{stops[graph.source].label} {format_clock(graph.source_time)} -> {stops[graph.target].label}",
        f"llegada esperada {graph.expected_arrival:.1f} s, llegada máxima {format_clock(graph.max_arr_time)}",
    ]
    if compact:
        for arc in compact_representation(graph, tt).arcs:
            lines.append(f"  {stops[arc.stop].label} {_slot_label(arc)} -> {stops[arc.destination].label}")
        return "\n".join(lines)
    for leg in graph.legs:
        enter, exit_ = tt.connections[leg.enter], tt.connections[leg.exit]
        lines.append(
            f"  {stops[enter.dep_stop].label} {format_clock(enter.dep_time)} -> "
            f"{stops[exit_.arr_stop].label} {format_clock(exit_.arr_time)} ({tt.trips[enter.trip].code})"
        )
    return "\n".join(lines)


def to_dot(graph: DecisionGraph, tt: Timetable, compact: bool = False) -> str:
    """GraphViz DOT; sin disposición, la resuelve quien lo dibuje"""
    stops = tt.stops
    lines = ["digraph decision {", "  rankdir=LR;"]
    for stop in graph.stops(tt):
        shape = "doublecircle" if stop in (graph.source, graph.target) else "circle"
        lines.append(f'  s{stop} [label="{stops[stop].label}", shape={shape}];')
    if compact:
        for arc in compact_representation(graph, tt).arcs:
            lines.append(f'  s{arc.stop} -> s{arc.destination} [label="{_slot_label(arc)}"];')
    else:
        for leg in graph.legs:
            enter, exit_ = tt.connections[leg.enter], tt.connections[leg.exit]
            label = f"{format_clock(enter.dep_time)} {tt.trips[enter.trip].code} {format_clock(exit_.arr_time)}"
            lines.append(f'  s{enter.dep_stop} -> s{exit_.arr_stop} [label="{label}"];')
    lines.append("}")
    return "\n".join(lines)
