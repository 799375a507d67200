from app.errors import InvalidParameterError
from app.timetable.model import is_infinite


def parse_clock(value: str) -> int:
    """`HH:MM[:SS]` o segundos enteros → segundos desde el inicio del servicio"""
    value = value.strip()
    if value.isdigit():
        return int(value)
    parts = value.split(":")
    if len(parts) not in (2, 3) or not all(p.isdigit() for p in parts):
        raise InvalidParameterError(f"hora inválida: {value!r}")
    hours, minutes = int(parts[0]), int(parts[1])
    seconds = int(parts[2]) if len(parts) == 3 else 0
    if minutes >= 60 or seconds >= 60:
        raise InvalidParameterError(f"hora inválida: {value!r}")
    return hours * 3600 + minutes * 60 + seconds


def format_clock(seconds) -> str:
    if seconds is None or is_infinite(int(seconds)):
        return "∞"
    seconds = int(round(seconds))
    return f"{seconds // 3600:02d}:{seconds % 3600 // 60:02d}:{seconds % 60:02d}"
