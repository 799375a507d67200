"""
Oráculos independientes del escaneo de conexiones.

- oracle_time_expanded_ea: Dijkstra sobre el grafo expandido en el tiempo.
- oracle_pareto_bruteforce: enumeración de viajes con memoria, solo para
  horarios pequeños.
"""

import logging
from bisect import bisect_left
from collections import defaultdict
from functools import lru_cache
from typing import Dict, List, Optional, Set, Tuple

import networkx as nx

from app.config import ORACLE_MAX_CONNECTIONS
from app.errors import InvalidParameterError, OracleRefusedError
from app.timetable.model import INFINITY, Timetable

logger = logging.getLogger(__name__)

SOURCE = ("source",)
SINK = ("sink",)


def _departure_events(tt: Timetable) -> Dict[int, List[int]]:
    times: Dict[int, Set[int]] = defaultdict(set)
    for c in tt.connections:
        times[c.dep_stop].add(c.dep_time)
    return {stop: sorted(ts) for stop, ts in times.items()}


def build_time_expanded_graph(tt: Timetable, t: int) -> Tuple[nx.DiGraph, Dict[int, List[int]]]:
    """
    Nodos: salida y llegada de cada conexión y una cadena de espera por parada
    con las horas de salida. Los pesos son diferencias de tiempo, así que la
    distancia desde el origen es la hora del nodo menos τ.
    """
    events = _departure_events(tt)
    g = nx.DiGraph()
    for stop, times in events.items():
        for a, b in zip(times, times[1:]):
            g.add_edge(("wait", stop, a), ("wait", stop, b), weight=b - a)

    for c in tt.connections:
        g.add_edge(("dep", c.id), ("arr", c.id), weight=c.arr_time - c.dep_time)
        g.add_edge(("wait", c.dep_stop, c.dep_time), ("dep", c.id), weight=0)
        trip = tt.trips[c.trip].connections
        pos = tt.trip_position[c.id]
        if pos + 1 < len(trip):
            nxt = tt.connections[trip[pos + 1]]
            g.add_edge(("arr", c.id), ("dep", nxt.id), weight=nxt.dep_time - c.arr_time)
        for f in tt.footpaths_out[c.arr_stop]:
            ready = c.arr_time + f.dur
            if f.arr_stop == t:
                g.add_edge(("arr", c.id), SINK, weight=f.dur)
            times = events.get(f.arr_stop)
            if not times:
                continue
            i = bisect_left(times, ready)
            if i < len(times):
                g.add_edge(("arr", c.id), ("wait", f.arr_stop, times[i]), weight=times[i] - c.arr_time)
    return g, events


def oracle_time_expanded_ea(tt: Timetable, s: int, tau: int, t: int) -> Optional[int]:
    """Llegada más temprana a t; None si no se llega"""
    tt.check_stop(s)
    tt.check_stop(t)
    g, events = build_time_expanded_graph(tt, t)
    g.add_node(SOURCE)
    g.add_node(SINK)
    for f in tt.footpaths_out[s]:
        if f.arr_stop == t:
            g.add_edge(SOURCE, SINK, weight=f.dur)
        times = events.get(f.arr_stop)
        if not times:
            continue
        i = bisect_left(times, tau + f.dur)
        if i < len(times):
            g.add_edge(SOURCE, ("wait", f.arr_stop, times[i]), weight=times[i] - tau)
    try:
        dist = nx.dijkstra_path_length(g, SOURCE, SINK, weight="weight")
    except nx.NetworkXNoPath:
        return None
    return tau + int(dist)


def oracle_pareto_bruteforce(
    tt: Timetable, s: int, tau_s: int, t: int, leg_max: int
) -> List[Tuple[int, int, int]]:
    """
    Tuplas (salida, llegada, tramos) no dominadas de los viajes de s a t que
    salen no antes de τs con 1 ≤ tramos ≤ leg_max.
    """
    if tt.num_connections > ORACLE_MAX_CONNECTIONS:
        raise OracleRefusedError(
            f"{tt.num_connections} conexiones; el oráculo acepta hasta {ORACLE_MAX_CONNECTIONS}"
        )
    if leg_max < 1:
        raise InvalidParameterError(f"leg_max debe ser ≥ 1: {leg_max}")
    tt.check_stop(s)
    tt.check_stop(t)

    conns = tt.connections
    departing: Dict[int, List[Tuple[int, int]]] = defaultdict(list)
    for c in conns:
        departing[c.dep_stop].append((c.dep_time, c.id))
    for entries in departing.values():
        entries.sort()
    final_walk = {f.dep_stop: f.dur for f in tt.footpaths_in[t]}

    def departures(stop: int, ready: int) -> List[int]:
        entries = departing.get(stop, [])
        return [cid for _, cid in entries[bisect_left(entries, (ready, -1)):]]

    def boardings(stop: int, ready: int) -> List[int]:
        """Primera conexión de cada trip que sale de `stop` desde `ready`"""
        seen, result = set(), []
        for cid in departures(stop, ready):
            trip = conns[cid].trip
            if trip not in seen:
                seen.add(trip)
                result.append(cid)
        return result

    @lru_cache(maxsize=None)
    def ride(cid: int, legs: int) -> int:
        """Mejor llegada subiendo en `cid` con a lo sumo `legs` tramos en total"""
        best = INFINITY
        trip = tt.trips[conns[cid].trip].connections
        for eid in trip[tt.trip_position[cid]:]:
            e = conns[eid]
            walk = final_walk.get(e.arr_stop)
            if walk is not None:
                best = min(best, e.arr_time + walk)
            if legs > 1:
                best = min(best, standing(e.arr_stop, e.arr_time, legs - 1))
        return best

    @lru_cache(maxsize=None)
    def standing(stop: int, time: int, legs: int) -> int:
        best = INFINITY
        for f in tt.footpaths_out[stop]:
            for cid in boardings(f.arr_stop, time + f.dur):
                best = min(best, ride(cid, legs))
        return best

    # en el origen cuenta cada salida, también la de un trip que vuelve a pasar por s
    candidates = set()
    for f in tt.footpaths_out[s]:
        for cid in departures(f.arr_stop, tau_s + f.dur):
            dep = conns[cid].dep_time - f.dur
            for legs in range(1, leg_max + 1):
                arr = ride(cid, legs)
                if arr < INFINITY:
                    candidates.add((dep, arr, legs))

    front = sorted(
        (dep, arr, legs)
        for dep, arr, legs in candidates
        if not any(
            (d2, a2, l2) != (dep, arr, legs) and d2 >= dep and a2 <= arr and l2 <= legs
            for d2, a2, l2 in candidates
        )
    )
    logger.debug("oráculo de Pareto %s → %s: %d tuplas", s, t, len(front))
    return front
