from app.timetable.builder import TimetableBuilder
from app.timetable.clock import format_clock, parse_clock
from app.timetable.loader import content_hash, dump_timetable, load_timetable, load_timetable_file, timetable_hash
from app.timetable.model import (
    INFINITY,
    AuxIndexes,
    Connection,
    Footpath,
    Stop,
    Timetable,
    Trip,
    build_aux_indexes,
    is_infinite,
    transfer_reachable,
)
from app.timetable.validation import ValidationReport, Violation, validate

__all__ = [
    "INFINITY",
    "AuxIndexes",
    "Connection",
    "Footpath",
    "Stop",
    "Timetable",
    "TimetableBuilder",
    "Trip",
    "ValidationReport",
    "Violation",
    "build_aux_indexes",
    "content_hash",
    "dump_timetable",
    "format_clock",
    "is_infinite",
    "load_timetable",
    "load_timetable_file",
    "parse_clock",
    "timetable_hash",
    "transfer_reachable",
    "validate",
]
