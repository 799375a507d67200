from dataclasses import dataclass, field
from typing import Iterator, List

from app.timetable.model import Timetable


@dataclass(frozen=True)
class Violation:
    kind: str
    message: str
    record: str = ""

    def __str__(self) -> str:
        if self.record:
            return f"[{self.kind}] {self.message}: {self.record}"
        return f"[{self.kind}] {self.message}"


@dataclass
class ValidationReport:
    violations: List[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def kinds(self) -> set:
        return {v.kind for v in self.violations}

    def add(self, kind: str, message: str, record: str = "") -> None:
        self.violations.append(Violation(kind, message, record))

    def __len__(self) -> int:
        return len(self.violations)

    def __iter__(self) -> Iterator[Violation]:
        return iter(self.violations)


def validate(tt: Timetable) -> ValidationReport:
    """Lista todas las violaciones de invariantes; vacío si el horario es válido"""
    report = ValidationReport()
    code = [s.code for s in tt.stops]

    for stop in tt.stops:
        if stop.change_time < 0:
            report.add("change-time", "tiempo de cambio negativo", f"S {stop.code} {stop.change_time}")

    prev_dep = None
    for index, c in enumerate(tt.connections):
        record = tt.describe_connection(index)
        if c.id != index:
            report.add("connection-order", f"id {c.id} en la posición {index}", record)
        if prev_dep is not None and c.dep_time < prev_dep:
            report.add("connection-order", "conexiones no ordenadas por salida", record)
        prev_dep = c.dep_time
        if c.dep_stop == c.arr_stop:
            report.add("connection-stops", "salida y llegada en la misma parada", record)
        if c.dep_time >= c.arr_time:
            report.add("connection-times", "dep_time ≥ arr_time", record)

    for trip in tt.trips:
        for cid in trip.connections:
            if tt.connections[cid].trip != trip.id:
                report.add("trip-ordering", f"conexión {cid} no pertenece al trip", f"T {trip.code}")
        for a, b in zip(trip.connections, trip.connections[1:]):
            ca, cb = tt.connections[a], tt.connections[b]
            if ca.arr_stop != cb.dep_stop:
                report.add(
                    "trip-ordering",
                    f"llega a {code[ca.arr_stop]} pero sigue desde {code[cb.dep_stop]}",
                    tt.describe_connection(b),
                )
            if ca.arr_time >= cb.dep_time:
                report.add(
                    "trip-ordering",
                    "la conexión sale antes de que llegue la anterior",
                    tt.describe_connection(b),
                )

    has_loop = [False] * tt.num_stops
    for f in tt.footpaths:
        record = f"F {code[f.dep_stop]} {code[f.arr_stop]} {f.dur}"
        if f.is_loop:
            has_loop[f.dep_stop] = True
            if f.dur != tt.change_time(f.dep_stop):
                report.add("loop-duration", "el lazo no coincide con el tiempo de cambio", record)
        elif f.dur <= 0:
            report.add("footpath-duration", "duración no positiva", record)
    for stop in tt.stops:
        if not has_loop[stop.id]:
            report.add("missing-loop", "parada sin lazo", f"S {stop.code} {stop.change_time}")

    # clausura transitiva y desigualdad triangular sobre caminos de dos aristas
    for a in range(tt.num_stops):
        for f1 in tt.footpaths_out[a]:
            if f1.is_loop:
                continue
            b = f1.arr_stop
            for f2 in tt.footpaths_out[b]:
                if f2.is_loop:
                    continue
                c = f2.arr_stop
                direct = tt.footpath_duration(a, c)
                triple = f"({code[a]},{code[b]},{code[c]})"
                if direct is None:
                    report.add("closure", f"falta la caminata {code[a]}→{code[c]}", triple)
                elif f1.dur + f2.dur < direct:
                    report.add(
                        "triangle",
                        f"{f1.dur} + {f2.dur} < {direct}",
                        triple,
                    )
    return report
