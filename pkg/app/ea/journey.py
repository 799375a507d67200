from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from app.timetable.clock import format_clock
from app.timetable.model import Footpath, Timetable, transfer_reachable


@dataclass(frozen=True, slots=True)
class Leg:
    enter: int
    exit: int


@dataclass(frozen=True, slots=True)
class JourneyPointer:
    """Registro (no referencia) para reconstruir el viaje hacia atrás"""

    enter: int
    exit: int
    final_footpath: Footpath


@dataclass(frozen=True)
class Journey:
    """Secuencia alternada f⁰, l⁰, f¹, …, l^{k−1}, f^k"""

    footpaths: Tuple[Footpath, ...]
    legs: Tuple[Leg, ...]
    dep_time: int
    arr_time: int

    @classmethod
    def build(
        cls,
        tt: Timetable,
        footpaths: Sequence[Footpath],
        legs: Sequence[Leg],
        source_time: Optional[int] = None,
    ) -> "Journey":
        footpaths, legs = tuple(footpaths), tuple(legs)
        if legs:
            first = tt.connections[legs[0].enter]
            last = tt.connections[legs[-1].exit]
            dep_time = first.dep_time - footpaths[0].dur
            arr_time = last.arr_time + footpaths[-1].dur
        else:
            dep_time = source_time
            arr_time = source_time + footpaths[0].dur
        return cls(footpaths, legs, dep_time, arr_time)

    @property
    def dep_stop(self) -> int:
        return self.footpaths[0].dep_stop

    @property
    def arr_stop(self) -> int:
        return self.footpaths[-1].arr_stop

    @property
    def num_legs(self) -> int:
        return len(self.legs)

    def transfer_stops(self) -> List[int]:
        """Paradas donde el viajero está de pie, sin repetir los lazos"""
        stops = [self.footpaths[0].dep_stop]
        for f in self.footpaths:
            for stop in (f.dep_stop, f.arr_stop):
                if stops[-1] != stop:
                    stops.append(stop)
        return stops

    def trips(self, tt: Timetable) -> List[int]:
        return [tt.connections[leg.enter].trip for leg in self.legs]

    def describe(self, tt: Timetable) -> List[str]:
        """Una línea por tramo: `enter_stop dep_time -> exit_stop arr_time (trip)`"""
        lines = []
        for leg in self.legs:
            enter, exit_ = tt.connections[leg.enter], tt.connections[leg.exit]
            lines.append(
                f"{tt.stops[enter.dep_stop].code} {format_clock(enter.dep_time)} -> "
                f"{tt.stops[exit_.arr_stop].code} {format_clock(exit_.arr_time)} "
                f"({tt.trips[enter.trip].code})"
            )
        return lines


def check_journey(tt: Timetable, journey: Journey, require_unique: bool = True) -> List[str]:
    """Vuelve a simular el viaje contra el horario; devuelve los problemas encontrados"""
    problems = []
    fps, legs = journey.footpaths, journey.legs
    if len(fps) != len(legs) + 1:
        return [f"{len(fps)} caminatas para {len(legs)} tramos"]
    for f in fps:
        known = tt.footpath(f.dep_stop, f.arr_stop)
        if known is None or known.dur != f.dur:
            problems.append(f"caminata inexistente {f}")

    for i, leg in enumerate(legs):
        enter, exit_ = tt.connections[leg.enter], tt.connections[leg.exit]
        if enter.trip != exit_.trip:
            problems.append(f"tramo {i}: entrada y salida en trips distintos")
        elif tt.trip_position[leg.enter] > tt.trip_position[leg.exit]:
            problems.append(f"tramo {i}: la entrada sigue a la salida")
        if fps[i].arr_stop != enter.dep_stop:
            problems.append(f"tramo {i}: la caminata no llega a la parada de subida")
        if fps[i + 1].dep_stop != exit_.arr_stop:
            problems.append(f"tramo {i}: la caminata no sale de la parada de bajada")
        if i > 0:
            prev = tt.connections[legs[i - 1].exit]
            if not transfer_reachable(tt, prev.arr_stop, prev.arr_time, enter.dep_stop, enter.dep_time):
                problems.append(f"transbordo {i} infactible")

    if legs:
        replay = Journey.build(tt, fps, legs)
        if (replay.dep_time, replay.arr_time) != (journey.dep_time, journey.arr_time):
            problems.append("las horas no coinciden con la simulación")
    if require_unique:
        stops = journey.transfer_stops()
        if len(set(stops)) != len(stops):
            problems.append("parada repetida")
        trips = journey.trips(tt)
        if len(set(trips)) != len(trips):
            problems.append("trip repetido")
    return problems
