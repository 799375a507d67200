"""
Perfiles de llegada esperada mínima (fase 1) y llegada segura más temprana.

Trabaja sobre horarios contraídos: sin caminatas salvo los lazos, de modo que
una entrada del perfil de una parada sale exactamente a la hora de su conexión.
"""

import logging
import math
from bisect import bisect_right
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from app.errors import InvalidParameterError
from app.meat.delay import DelayModel, delay_cdf
from app.timetable.model import INFINITY, Timetable

logger = logging.getLogger(__name__)


def check_contracted(tt: Timetable) -> None:
    if any(not f.is_loop for f in tt.footpaths):
        raise InvalidParameterError("el horario tiene caminatas entre paradas: contráelo primero")


class EatProfile:
    """Pares (salida, llegada esperada) guardados al revés: el frente es el último"""

    __slots__ = ("deps", "eats", "conns")

    def __init__(self):
        self.deps: List[int] = []
        self.eats: List[float] = []
        self.conns: List[int] = []

    def __len__(self) -> int:
        return len(self.deps)

    def front_eat(self) -> float:
        return self.eats[-1] if self.eats else math.inf

    def insert(self, dep: int, eat: float, cid: int, beta: float) -> bool:
        if self.deps and self.deps[-1] == dep:
            if eat < self.eats[-1]:
                self.eats[-1] = eat
                self.conns[-1] = cid
                return True
            return False
        if self.front_eat() - eat <= beta:
            return False
        self.deps.append(dep)
        self.eats.append(eat)
        self.conns.append(cid)
        return True

    def first_index_at_or_after(self, tau: float) -> int:
        """Índice de la primera entrada con salida ≥ τ, o −1"""
        # deps decrece a lo largo de la lista
        count = bisect_right(self.deps, -tau, key=lambda d: -d)
        return count - 1

    def entries(self) -> List[Tuple[int, float, int]]:
        """Entradas de frente a fondo"""
        return list(zip(reversed(self.deps), reversed(self.eats), reversed(self.conns)))


def continuation(
    profile: EatProfile,
    arr_time: int,
    min_delay: int,
    max_delay: int,
) -> List[Tuple[int, float, int, float]]:
    """
    Entradas con peso positivo tras una llegada programada a `arr_time`.

    Devuelve (salida, llegada esperada, conexión, peso) hasta acumular
    probabilidad 1; la lista se corta antes si el perfil se acaba.
    """
    result = []
    i = profile.first_index_at_or_after(arr_time)
    previous = 0.0
    while i >= 0:
        dep = profile.deps[i]
        p = delay_cdf(min_delay, max_delay, dep - arr_time)
        weight = p - previous
        if weight > 0:
            result.append((dep, profile.eats[i], profile.conns[i], weight))
            previous = p
        if p >= 1.0:
            break
        i -= 1
    return result


def weighted_arrival(entries: Sequence[Tuple[int, float, int, float]]) -> float:
    """Suma compensada Σ peso·llegada; ∞ si no se cubre probabilidad 1"""
    total, compensation, mass = 0.0, 0.0, 0.0
    for _, eat, _, weight in entries:
        if math.isinf(eat):
            return math.inf
        term = weight * eat - compensation
        updated = total + term
        compensation = (updated - total) - term
        total = updated
        mass += weight
    if not entries or mass < 1.0 - 1e-12:
        return math.inf
    return total


@dataclass
class EatProfileStore:
    tt: Timetable
    target: int
    model: DelayModel
    beta: float
    profiles: List[EatProfile]
    trip_values: List[float]
    # e(c) por conexión; ∞ para las no escaneadas
    connection_values: List[float]
    scanned: int = 0

    def profile(self, stop: int) -> EatProfile:
        return self.profiles[stop]

    def expected_arrival(self, stop: int, tau: int) -> float:
        profile = self.profiles[stop]
        i = profile.first_index_at_or_after(tau)
        return profile.eats[i] if i >= 0 else math.inf

    def continuation(self, cid: int) -> List[Tuple[int, float, int, float]]:
        c = self.tt.connections[cid]
        return continuation(
            self.profiles[c.arr_stop], c.arr_time, self.tt.change_time(c.arr_stop), self.model.max_delay
        )


def meat_profile_scan(
    tt: Timetable,
    t: int,
    model: DelayModel,
    beta: float = 0.0,
    source_time: Optional[int] = None,
    latest_arrival: Optional[float] = None,
    reachable: Optional[Sequence[bool]] = None,
) -> EatProfileStore:
    """
    Escanea por salida decreciente. Para cada conexión:
    τ1 = llegada + E[D] si llega a t, τ2 = valor del trip y τ3 = media ponderada
    de las entradas del perfil de la llegada. La entrada solo se guarda si
    mejora el frente en más de β.
    """
    check_contracted(tt)
    tt.check_stop(t)
    if beta < 0:
        raise InvalidParameterError(f"β negativo: {beta}")

    store = EatProfileStore(
        tt, t, model, beta,
        profiles=[EatProfile() for _ in tt.stops],
        trip_values=[math.inf] * tt.num_trips,
        connection_values=[math.inf] * tt.num_connections,
    )
    lo = tt.first_departing_at_or_after(source_time) if source_time is not None else 0
    conns = tt.connections
    for cid in range(tt.num_connections - 1, lo - 1, -1):
        c = conns[cid]
        if latest_arrival is not None and c.arr_time > latest_arrival:
            continue
        if reachable is not None and not reachable[cid]:
            continue
        store.scanned += 1

        if c.arr_stop == t:
            tau = c.arr_time + model.expected(tt, c)
        else:
            tau = weighted_arrival(store.continuation(cid))
        tau = min(tau, store.trip_values[c.trip])
        if math.isinf(tau):
            continue
        store.trip_values[c.trip] = tau
        store.connection_values[cid] = tau
        store.profiles[c.dep_stop].insert(c.dep_time, tau, cid, beta)

    logger.debug("perfil esperado hacia %s: %d conexiones escaneadas", t, store.scanned)
    return store


def reachable_connections(
    tt: Timetable,
    s: int,
    tau_s: int,
    until: Optional[float] = None,
) -> List[bool]:
    """
    Conexiones que se pueden tomar desde (s, τs) transbordando sin holgura.
    Es un superconjunto de las que usa cualquier viaje seguro.
    """
    tt.check_stop(s)
    arrival = [INFINITY] * tt.num_stops
    arrival[s] = tau_s
    entered = [False] * tt.num_trips
    result = [False] * tt.num_connections
    for cid in range(tt.first_departing_at_or_after(tau_s), tt.num_connections):
        c = tt.connections[cid]
        if until is not None and c.dep_time > until:
            break
        if not entered[c.trip]:
            if arrival[c.dep_stop] > c.dep_time:
                continue
            entered[c.trip] = True
        result[cid] = True
        if c.arr_time < arrival[c.arr_stop]:
            arrival[c.arr_stop] = c.arr_time
    return result


def esat(tt: Timetable, s: int, tau_s: int, t: int, model: DelayModel) -> Optional[int]:
    """
    Llegada segura más temprana: cada transbordo exige salida ≥ llegada + max_D.
    Quedarse sentado no se ve afectado; None si no hay viaje seguro.
    """
    check_contracted(tt)
    tt.check_stop(s)
    tt.check_stop(t)
    if s == t:
        return tau_s
    ready = [INFINITY] * tt.num_stops
    ready[s] = tau_s
    entered = [False] * tt.num_trips
    best = INFINITY
    for cid in range(tt.first_departing_at_or_after(tau_s), tt.num_connections):
        c = tt.connections[cid]
        if best <= c.dep_time:
            break
        if not entered[c.trip]:
            if ready[c.dep_stop] > c.dep_time:
                continue
            entered[c.trip] = True
        if c.arr_stop == t:
            best = min(best, c.arr_time)
            continue
        safe = c.arr_time + model.max_delay_of(tt, c)
        if safe < ready[c.arr_stop]:
            ready[c.arr_stop] = safe
    return None if best >= INFINITY else best


def eat_lower_bound(tt: Timetable, s: int, tau_s: int, t: int) -> Optional[int]:
    """Llegada programada más temprana sin holgura de transbordo, cota inferior de esat"""
    check_contracted(tt)
    if s == t:
        return tau_s
    arrival = [INFINITY] * tt.num_stops
    arrival[s] = tau_s
    entered = [False] * tt.num_trips
    for cid in range(tt.first_departing_at_or_after(tau_s), tt.num_connections):
        c = tt.connections[cid]
        if arrival[t] <= c.dep_time:
            break
        if not entered[c.trip]:
            if arrival[c.dep_stop] > c.dep_time:
                continue
            entered[c.trip] = True
        arrival[c.arr_stop] = min(arrival[c.arr_stop], c.arr_time)
    return None if arrival[t] >= INFINITY else arrival[t]
