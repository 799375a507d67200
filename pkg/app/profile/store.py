"""
Perfiles por parada.

Cada perfil se guarda al revés: el frente (salida más temprana) es el último
elemento de la lista, así insertar al frente es un `append`. El índice 0
siempre contiene el centinela (∞, ∞).
"""

from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from app.errors import InternalConsistencyError
from app.profile.packed import TimeEncoding
from app.profile.vectors import infinite_vector
from app.timetable.model import INFINITY, Timetable


@dataclass(frozen=True)
class ProfileEntry:
    dep_time: int
    arrival: Any
    enter: Any = None
    exit: Any = None


def evaluate_profile(entries: Sequence[Tuple[int, Any]], tau: int, binary: bool = False) -> Any:
    """
    Llegada del primer par con salida ≥ τ.

    `entries` va de frente a fondo y termina en el centinela.
    """
    if binary:
        return entries[bisect_left([dep for dep, _ in entries], tau)][1]
    for dep, arrival in entries:
        if dep >= tau:
            return arrival
    raise InternalConsistencyError("perfil sin centinela")


class StopProfile:
    __slots__ = ("deps", "arrs", "enters", "exits")

    def __init__(self, sentinel: Any, sentinel_payload: Any = -1):
        self.deps: List[int] = [INFINITY]
        self.arrs: List[Any] = [sentinel]
        self.enters: List[Any] = [sentinel_payload]
        self.exits: List[Any] = [sentinel_payload]

    def __len__(self) -> int:
        return len(self.deps) - 1

    def front(self) -> Tuple[int, Any]:
        return self.deps[-1], self.arrs[-1]

    def evaluate_index(self, tau: int) -> int:
        i = len(self.deps) - 1
        deps = self.deps
        while deps[i] < tau:
            i -= 1
        return i

    def evaluate(self, tau: int) -> Any:
        return self.arrs[self.evaluate_index(tau)]

    def evaluate_binary(self, tau: int) -> Any:
        # deps decrece a lo largo de la lista
        count = bisect_right(self.deps, -tau, key=lambda d: -d)
        return self.arrs[count - 1]

    def _pop(self) -> Tuple[int, Any, Any, Any]:
        return self.deps.pop(), self.arrs.pop(), self.enters.pop(), self.exits.pop()

    def _push(self, dep: int, arr: Any, enter: Any, exit_: Any) -> None:
        self.deps.append(dep)
        self.arrs.append(arr)
        self.enters.append(enter)
        self.exits.append(exit_)

    def insert_scalar(self, dep: int, arr: int, enter: int = -1, exit_: int = -1) -> int:
        """
        Incorpora (dep, arr) quitando temporalmente los pares que salen antes.

        Returns:
            longitud de la ventana reescrita
        """
        removed = []
        while self.deps[-1] < dep:
            removed.append(self._pop())
        if arr < self.arrs[-1]:
            if self.deps[-1] == dep:
                self._pop()
            self._push(dep, arr, enter, exit_)
        for entry in reversed(removed):
            if entry[1] < self.arrs[-1]:
                self._push(*entry)
        return len(removed)

    def insert_vector(
        self,
        dep: int,
        vec: np.ndarray,
        enter: Optional[np.ndarray] = None,
        exit_: Optional[np.ndarray] = None,
    ) -> int:
        """Versión vectorial: guarda min(y, τc) si mejora alguna componente de y"""
        removed = []
        while self.deps[-1] < dep:
            removed.append(self._pop())
        self._merge_front(dep, vec, enter, exit_, replace_same_dep=True)
        for r_dep, r_arr, r_enter, r_exit in reversed(removed):
            self._merge_front(r_dep, r_arr, r_enter, r_exit, replace_same_dep=False)
        return len(removed)

    def _merge_front(self, dep, vec, enter, exit_, replace_same_dep: bool) -> None:
        y = self.arrs[-1]
        better = vec < y
        if not better.any():
            return
        merged = np.where(better, vec, y)
        if enter is not None:
            enter = np.where(better, enter, self.enters[-1])
            exit_ = np.where(better, exit_, self.exits[-1])
        if replace_same_dep and self.deps[-1] == dep:
            self._pop()
        self._push(dep, merged, enter, exit_)

    def entries(self, include_sentinel: bool = False) -> List[ProfileEntry]:
        """Entradas de frente a fondo"""
        stop = 0 if include_sentinel else 1
        return [
            ProfileEntry(self.deps[i], self.arrs[i], self.enters[i], self.exits[i])
            for i in range(len(self.deps) - 1, stop - 1, -1)
        ]

    def pairs(self, include_sentinel: bool = False) -> List[Tuple[int, Any]]:
        return [(e.dep_time, e.arrival) for e in self.entries(include_sentinel)]

    def check(self) -> None:
        """Orden por salida y dominancia entre entradas consecutivas"""
        for i in range(len(self.deps) - 1, 0, -1):
            dep, arr = self.deps[i], self.arrs[i]
            later_dep, later_arr = self.deps[i - 1], self.arrs[i - 1]
            if dep >= later_dep:
                raise InternalConsistencyError(f"salidas no crecientes: {dep} ≥ {later_dep}")
            if isinstance(arr, np.ndarray):
                if np.all(later_arr <= arr):
                    raise InternalConsistencyError(f"vector dominado en la salida {dep}")
            elif arr >= later_arr:
                raise InternalConsistencyError(f"llegada no creciente en la salida {dep}")


class ProfileStore:
    """S, T y D de una consulta de perfil"""

    def __init__(
        self,
        tt: Timetable,
        target: int,
        encoding: TimeEncoding = TimeEncoding(),
        leg_max: Optional[int] = None,
        modified_shift: bool = False,
        final_footpaths: Optional[Mapping[int, int]] = None,
    ):
        self.tt = tt
        self.target = target
        self.encoding = encoding
        self.leg_max = leg_max
        self.modified_shift = modified_shift
        self.final_footpaths: Optional[Dict[int, int]] = (
            dict(final_footpaths) if final_footpaths is not None else None
        )
        if leg_max is None:
            self.profiles = [StopProfile(INFINITY) for _ in tt.stops]
            self.trip_values: List[Any] = [INFINITY] * tt.num_trips
            self.trip_exits: List[Any] = [-1] * tt.num_trips
        else:
            none_ids = np.full(leg_max, -1, dtype=np.int64)
            self.profiles = [StopProfile(infinite_vector(leg_max), none_ids) for _ in tt.stops]
            self.trip_values = [infinite_vector(leg_max) for _ in range(tt.num_trips)]
            self.trip_exits = [np.full(leg_max, -1, dtype=np.int64) for _ in range(tt.num_trips)]
        self.walk: List[int] = [INFINITY] * tt.num_stops
        self.scanned = 0
        self.max_window = 0
        self.window: Tuple[Optional[int], Optional[int]] = (None, None)

    @property
    def is_pareto(self) -> bool:
        return self.leg_max is not None

    def profile(self, stop: int) -> StopProfile:
        return self.profiles[stop]

    def evaluate(self, stop: int, tau: int) -> Any:
        return self.profiles[stop].evaluate(tau)

    def earliest_arrival(self, stop: int, tau: int) -> int:
        """Llegada desempaquetada (modo escalar)"""
        return self.encoding.arrival(self.profiles[stop].evaluate(tau))

    def pairs(self, stop: int, include_sentinel: bool = False) -> List[Tuple[int, Any]]:
        return self.profiles[stop].pairs(include_sentinel)

    def walk_sources(self) -> Dict[int, int]:
        """D: duración de la caminata final de cada parada hacia el destino"""
        if self.final_footpaths is not None:
            return dict(self.final_footpaths)
        return {f.dep_stop: f.dur for f in self.tt.footpaths_in[self.target]}

    def walk_duration(self, stop: int) -> Optional[int]:
        return self.walk_sources().get(stop)

    def set_walk(self) -> None:
        for stop, dur in self.walk_sources().items():
            self.walk[stop] = dur

    def reset_walk(self) -> None:
        for stop in self.walk_sources():
            self.walk[stop] = INFINITY
