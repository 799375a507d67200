"""
Connection Scan de perfiles: perfiles de llegada más temprana (escalares, con
desempate por número de tramos) y perfiles de Pareto por número de tramos.

Las conexiones se recorren por hora de salida decreciente. Para cada conexión
c se calcula
    τ1: bajar y caminar al destino,
    τ2: seguir sentado en el trip,
    τ3: bajar y transbordar (perfil de la parada de llegada),
y τc = min(τ1, τ2, τ3) se incorpora en los perfiles de las paradas desde las
que se llega caminando a la parada de salida.
"""

import logging
from bisect import bisect_left, bisect_right
from dataclasses import dataclass, replace
from typing import Iterable, List, Mapping, Optional, Sequence

import numpy as np

from app.ea.scan import EaOptions, scan_earliest_arrival
from app.errors import InvalidParameterError
from app.profile.packed import TimeEncoding
from app.profile.store import ProfileStore
from app.profile.vectors import broadcast, check_leg_max, vector_shift
from app.timetable.model import INFINITY, Timetable

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ProfileOptions:
    source: Optional[int] = None
    source_time: Optional[int] = None
    horizon: Optional[int] = None
    limited_walking: bool = True
    source_domination: bool = False
    prune_unreachable: bool = False
    leg_tiebreak: bool = False
    rounding_bits: int = 0
    journey_pointers: bool = False
    modified_shift: bool = False
    final_footpaths: Optional[Mapping[int, int]] = None
    # comprueba los invariantes del perfil tras cada inserción
    verify: bool = False


DEFAULT_PROFILE_OPTIONS = ProfileOptions()


def _scan_order(
    tt: Timetable,
    lo_time: Optional[int],
    hi_time: Optional[int],
    connections: Optional[Sequence[int]],
) -> Iterable[int]:
    """Ids de la ventana [τs, τt] en orden de salida decreciente"""
    if connections is None:
        lo = tt.first_departing_at_or_after(lo_time) if lo_time is not None else 0
        hi = tt.last_departing_at_or_before(hi_time) if hi_time is not None else tt.num_connections - 1
        return range(hi, lo - 1, -1)
    key = lambda cid: tt.connections[cid].dep_time  # noqa: E731
    lo = bisect_left(connections, lo_time, key=key) if lo_time is not None else 0
    hi = bisect_right(connections, hi_time, key=key) if hi_time is not None else len(connections)
    return (connections[i] for i in range(hi - 1, lo - 1, -1))


def _reachable_trips(
    tt: Timetable,
    opts: ProfileOptions,
    connections: Optional[Sequence[int]],
) -> Optional[List[bool]]:
    if not opts.prune_unreachable:
        return None
    result = scan_earliest_arrival(
        tt, opts.source, opts.source_time, None,
        EaOptions(stop_criterion=False), connections=connections, until=opts.horizon,
    )
    return [result.state.trip_reached(trip) for trip in range(tt.num_trips)]


def _check_opts(tt: Timetable, t: int, opts: ProfileOptions) -> None:
    tt.check_stop(t)
    if opts.source is not None:
        tt.check_stop(opts.source)
    needs_source = opts.source_domination or opts.prune_unreachable
    if needs_source and (opts.source is None or opts.source_time is None):
        raise InvalidParameterError("la dominancia por origen y la poda de trips requieren s y τs")


def ea_profile(
    tt: Timetable,
    t: int,
    opts: ProfileOptions = DEFAULT_PROFILE_OPTIONS,
    connections: Optional[Sequence[int]] = None,
    reachable_trips: Optional[Sequence[bool]] = None,
) -> ProfileStore:
    """Perfil escalar hacia t de todas las paradas, restringido a la ventana escaneada"""
    _check_opts(tt, t, opts)
    encoding = TimeEncoding(opts.leg_tiebreak, opts.rounding_bits)
    store = ProfileStore(tt, t, encoding, final_footpaths=opts.final_footpaths)
    store.window = (opts.source_time, opts.horizon)
    if reachable_trips is None:
        reachable_trips = _reachable_trips(tt, opts, connections)

    conns = tt.connections
    profiles, trip_values, trip_exits, walk = store.profiles, store.trip_values, store.trip_exits, store.walk
    source_profile = profiles[opts.source] if opts.source_domination else None
    pointers = opts.journey_pointers

    store.set_walk()
    try:
        for cid in _scan_order(tt, opts.source_time, opts.horizon, connections):
            c = conns[cid]
            if reachable_trips is not None and not reachable_trips[c.trip]:
                continue
            store.scanned += 1

            d = walk[c.arr_stop]
            tau1 = encoding.encode(c.arr_time + d, 1) if d < INFINITY else INFINITY
            tau2 = trip_values[c.trip]
            tau3 = encoding.add_leg(profiles[c.arr_stop].evaluate(c.arr_time))
            tau_c = min(tau1, tau2, tau3)
            if tau_c >= INFINITY:
                continue
            if tau_c < tau2:
                trip_values[c.trip] = tau_c
                trip_exits[c.trip] = cid

            if source_profile is not None and source_profile.evaluate(c.dep_time) <= tau_c:
                continue
            if opts.limited_walking and profiles[c.dep_stop].evaluate(c.dep_time) <= tau_c:
                continue
            enter, exit_ = (cid, trip_exits[c.trip]) if pointers else (-1, -1)
            for f in tt.footpaths_in[c.dep_stop]:
                profile = profiles[f.dep_stop]
                window = profile.insert_scalar(c.dep_time - f.dur, tau_c, enter, exit_)
                if window > store.max_window:
                    store.max_window = window
                if opts.verify:
                    profile.check()
    finally:
        store.reset_walk()

    logger.debug("perfil hacia %s: %d conexiones, ventana máx %d", t, store.scanned, store.max_window)
    return store


def pareto_profile(
    tt: Timetable,
    t: int,
    leg_max: int = 8,
    opts: ProfileOptions = DEFAULT_PROFILE_OPTIONS,
    connections: Optional[Sequence[int]] = None,
    reachable_trips: Optional[Sequence[bool]] = None,
) -> ProfileStore:
    """Perfil de Pareto: cada llegada es un vector indexado por el máximo de tramos"""
    check_leg_max(leg_max)
    _check_opts(tt, t, opts)
    store = ProfileStore(
        tt, t, leg_max=leg_max, modified_shift=opts.modified_shift, final_footpaths=opts.final_footpaths
    )
    store.window = (opts.source_time, opts.horizon)
    if reachable_trips is None:
        reachable_trips = _reachable_trips(tt, opts, connections)

    conns = tt.connections
    profiles, trip_values, trip_exits, walk = store.profiles, store.trip_values, store.trip_exits, store.walk
    source_profile = profiles[opts.source] if opts.source_domination else None
    pointers = opts.journey_pointers

    store.set_walk()
    try:
        for cid in _scan_order(tt, opts.source_time, opts.horizon, connections):
            c = conns[cid]
            if reachable_trips is not None and not reachable_trips[c.trip]:
                continue
            store.scanned += 1

            tau2 = trip_values[c.trip]
            tau_c = np.minimum(tau2, vector_shift(profiles[c.arr_stop].evaluate(c.arr_time), opts.modified_shift))
            d = walk[c.arr_stop]
            if d < INFINITY:
                tau_c = np.minimum(tau_c, broadcast(c.arr_time + d, leg_max))
            if tau_c[-1] >= INFINITY:
                continue
            improved = tau_c < tau2
            if improved.any():
                trip_values[c.trip] = tau_c
                if pointers:
                    trip_exits[c.trip] = np.where(improved, cid, trip_exits[c.trip])

            if source_profile is not None and np.all(source_profile.evaluate(c.dep_time) <= tau_c):
                continue
            if opts.limited_walking and np.all(profiles[c.dep_stop].evaluate(c.dep_time) <= tau_c):
                continue
            enter = broadcast(cid, leg_max) if pointers else None
            exit_ = trip_exits[c.trip] if pointers else None
            for f in tt.footpaths_in[c.dep_stop]:
                profile = profiles[f.dep_stop]
                window = profile.insert_vector(c.dep_time - f.dur, tau_c, enter, exit_)
                if window > store.max_window:
                    store.max_window = window
                if opts.verify:
                    profile.check()
    finally:
        store.reset_walk()

    logger.debug("perfil de Pareto hacia %s: %d conexiones", t, store.scanned)
    return store


@dataclass
class RangeResult:
    store: Optional[ProfileStore]
    earliest_arrival: Optional[int]
    horizon: Optional[int]
    forward_scanned: int = 0

    @property
    def reachable(self) -> bool:
        return self.store is not None

    @property
    def scanned(self) -> int:
        backward = self.store.scanned if self.store is not None else 0
        return self.forward_scanned + backward


def range_query(
    tt: Timetable,
    s: int,
    tau_s: int,
    t: int,
    leg_max: Optional[int] = None,
    opts: ProfileOptions = DEFAULT_PROFILE_OPTIONS,
    connections: Optional[Sequence[int]] = None,
) -> RangeResult:
    """
    Perfil restringido a llegadas ≤ τt = τs + 2·(x − τs), con x la llegada más
    temprana. Un escaneo hacia adelante marca los trips alcanzables; el escaneo
    de perfil salta las conexiones de trips no alcanzados.
    """
    tt.check_stop(s)
    tt.check_stop(t)
    first = scan_earliest_arrival(tt, s, tau_s, t, EaOptions(), connections=connections)
    if first.arrival is None:
        return RangeResult(None, None, None, first.scanned)
    horizon = tau_s + 2 * (first.arrival - tau_s)
    reach = scan_earliest_arrival(
        tt, s, tau_s, None, EaOptions(stop_criterion=False), connections=connections, until=horizon
    )
    reachable = [reach.state.trip_reached(trip) for trip in range(tt.num_trips)]

    window_opts = replace(opts, source=s, source_time=tau_s, horizon=horizon, prune_unreachable=False)
    if leg_max is None:
        store = ea_profile(tt, t, window_opts, connections, reachable_trips=reachable)
    else:
        store = pareto_profile(tt, t, leg_max, window_opts, connections, reachable_trips=reachable)
    return RangeResult(store, first.arrival, horizon, first.scanned + reach.scanned)


def filter_range(pairs, tau_s: int, horizon: int, encoding: TimeEncoding = TimeEncoding()) -> list:
    """Pares con salida ≥ τs y llegada ≤ τt; en vectores las componentes tardías pasan a ∞"""
    result = []
    for dep, value in pairs:
        if dep < tau_s:
            continue
        if isinstance(value, np.ndarray):
            value = np.where(value <= horizon, value, INFINITY)
            if np.all(value >= INFINITY):
                continue
            result.append((dep, value))
        elif encoding.arrival(value) <= horizon:
            result.append((dep, value))
    if result and isinstance(result[0][1], np.ndarray):
        # un par igual al siguiente (que sale más tarde) queda dominado
        kept = []
        for dep, value in reversed(result):
            if kept and np.array_equal(kept[-1][1], value):
                continue
            kept.append((dep, value))
        result = kept[::-1]
    return result


def merge_source_profile(store: ProfileStore, initial_footpaths: Mapping[int, int]) -> list:
    """
    Perfil del origen con un conjunto propio de caminatas iniciales: combina los
    perfiles de las paradas alcanzables a pie y conserva el frente de Pareto.
    """
    candidates = []
    for stop, dur in initial_footpaths.items():
        for dep, value in store.pairs(stop):
            candidates.append((dep - dur, value))
    candidates.sort(key=lambda p: (-p[0], p[1]))
    front = []
    best = INFINITY
    for dep, value in candidates:
        if value < best:
            if front and front[-1][0] == dep:
                front.pop()
            front.append((dep, value))
            best = value
    front.reverse()
    return front


def pareto_tuples(pairs) -> List[tuple]:
    """
    Tuplas (salida, llegada, tramos) no dominadas de un perfil de Pareto.

    Una tupla domina a otra si sale igual o más tarde, llega igual o antes y
    usa igual o menos tramos.
    """
    candidates = set()
    for dep, vec in pairs:
        previous = INFINITY
        for legs, arr in enumerate(vec, start=1):
            arr = int(arr)
            if arr < previous:
                candidates.add((dep, arr, legs))
                previous = arr
    front = []
    for dep, arr, legs in candidates:
        dominated = any(
            (d2, a2, l2) != (dep, arr, legs) and d2 >= dep and a2 <= arr and l2 <= legs
            for d2, a2, l2 in candidates
        )
        if not dominated:
            front.append((dep, arr, legs))
    return sorted(front)
