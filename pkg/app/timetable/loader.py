"""
Formato de texto del horario (UTF-8, una línea por registro, `#` comenta):

    S <stop_id> <change_time_s> [name]
    T <trip_id>
    C <trip_id> <dep_stop> <arr_stop> <dep_time_s> <arr_time_s>
    F <dep_stop> <arr_stop> <dur_s>
"""

import hashlib
import logging
from pathlib import Path
from typing import List, Tuple, Union

from app.errors import ConnScanError, TimetableParseError
from app.timetable.builder import TimetableBuilder
from app.timetable.model import Timetable

logger = logging.getLogger(__name__)

_ARITY = {"S": 3, "T": 2, "C": 6, "F": 4}


def content_hash(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def _int(value: str, line_no: int, raw: str) -> int:
    try:
        return int(value)
    except ValueError:
        raise TimetableParseError(line_no, f"entero inválido {value!r}", raw) from None


def load_timetable(source: str, synthesize_closure: bool = False) -> Timetable:
    """Carga un horario desde su documento de texto"""
    records: List[Tuple[int, str, List[str]]] = []
    for line_no, raw in enumerate(source.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        kind = parts[0]
        if kind not in _ARITY:
            raise TimetableParseError(line_no, f"registro desconocido {kind!r}", raw)
        arity = _ARITY[kind]
        if (kind == "S" and len(parts) < arity) or (kind != "S" and len(parts) != arity):
            raise TimetableParseError(line_no, f"número de campos incorrecto para {kind}", raw)
        records.append((line_no, raw, parts))

    builder = TimetableBuilder()
    # paradas y trips primero: se permiten referencias hacia adelante
    for kind_pass in ("S", "T", "C", "F"):
        for line_no, raw, parts in records:
            if parts[0] != kind_pass:
                continue
            try:
                if kind_pass == "S":
                    name = " ".join(parts[3:]) or None
                    builder.add_stop(parts[1], _int(parts[2], line_no, raw), name)
                elif kind_pass == "T":
                    builder.add_trip(parts[1])
                elif kind_pass == "C":
                    builder.add_connection(
                        parts[1], parts[2], parts[3],
                        _int(parts[4], line_no, raw), _int(parts[5], line_no, raw),
                    )
                else:
                    builder.add_footpath(parts[1], parts[2], _int(parts[3], line_no, raw))
            except TimetableParseError:
                raise
            except ConnScanError as e:
                raise TimetableParseError(line_no, str(e), raw) from e

    tt = builder.build(check=True, synthesize_closure=synthesize_closure)
    logger.info("📥 Horario cargado: %d paradas, %d conexiones", tt.num_stops, tt.num_connections)
    return tt


def load_timetable_file(path: Union[str, Path], synthesize_closure: bool = False) -> Timetable:
    return load_timetable(Path(path).read_text(encoding="utf-8"), synthesize_closure)


def dump_timetable(tt: Timetable) -> str:
    """Documento de texto equivalente; los lazos salen del tiempo de cambio"""
    lines = []
    for stop in tt.stops:
        name = f" {stop.name}" if stop.name else ""
        lines.append(f"S {stop.code} {stop.change_time}{name}")
    for trip in tt.trips:
        lines.append(f"T {trip.code}")
    for c in tt.connections:
        lines.append(tt.describe_connection(c.id))
    for f in tt.footpaths:
        if not f.is_loop:
            lines.append(f"F {tt.stops[f.dep_stop].code} {tt.stops[f.arr_stop].code} {f.dur}")
    return "\n".join(lines) + "\n"


def timetable_hash(tt: Timetable) -> str:
    return content_hash(dump_timetable(tt))
