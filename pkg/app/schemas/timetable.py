from datetime import datetime
from typing import List, Optional, Union

from pydantic import BaseModel, field_validator

from app.config import DEFAULT_ALPHA, DEFAULT_MAX_DELAY
from app.errors import InvalidParameterError
from app.timetable.clock import parse_clock


def _clock(v):
    if isinstance(v, int):
        if v < 0:
            raise ValueError("la hora no puede ser negativa")
        return v
    try:
        return parse_clock(v)
    except InvalidParameterError as e:
        raise ValueError(str(e)) from e


# ==================== SCHEMAS PARA HORARIOS ====================

class TimetableCreate(BaseModel):
    name: str
    content: str
    synthesize_closure: bool = False

    @field_validator("content")
    @classmethod
    def validate_content(cls, v):
        if not v.strip():
            raise ValueError("el horario está vacío")
        return v


class TimetableResponse(BaseModel):
    id: int
    name: str
    content_hash: str
    synthesize_closure: bool
    num_stops: int
    num_trips: int
    num_connections: int
    num_footpaths: int
    created_at: datetime

    class Config:
        from_attributes = True


class ViolationResponse(BaseModel):
    kind: str
    message: str
    record: str = ""


class ValidationResponse(BaseModel):
    ok: bool
    violations: List[ViolationResponse] = []


# ==================== SCHEMAS PARA CONSULTAS ====================

class LegResponse(BaseModel):
    trip: str
    enter_stop: str
    dep_time: int
    exit_stop: str
    arr_time: int


class JourneyResponse(BaseModel):
    dep_time: int
    arr_time: int
    legs: List[LegResponse]


class EaRequest(BaseModel):
    source: str
    time: Union[int, str]
    target: str

    @field_validator("time")
    @classmethod
    def validate_time(cls, v):
        return _clock(v)


class EaResponse(BaseModel):
    arrival: Optional[int] = None
    scanned: int
    journey: Optional[JourneyResponse] = None


class ProfileRequest(BaseModel):
    source: str
    target: str
    leg_max: Optional[int] = None  # None: perfil escalar

    @field_validator("leg_max")
    @classmethod
    def validate_leg_max(cls, v):
        if v is not None and v < 1:
            raise ValueError("leg_max debe ser ≥ 1")
        return v


class RangeRequest(ProfileRequest):
    time: Union[int, str]

    @field_validator("time")
    @classmethod
    def validate_time(cls, v):
        return _clock(v)


class ProfileEntryResponse(BaseModel):
    dep_time: int
    arr_time: int
    legs: Optional[int] = None


class ProfileResponse(BaseModel):
    entries: List[ProfileEntryResponse]
    scanned: int
    earliest_arrival: Optional[int] = None
    horizon: Optional[int] = None


class MeatRequest(BaseModel):
    source: str
    time: Union[int, str]
    target: str
    alpha: float = DEFAULT_ALPHA
    max_delay: int = DEFAULT_MAX_DELAY
    beta: float = 0.0
    arc_budget: Optional[int] = None
    emit: Optional[str] = None  # "text" o "dot"
    compact: bool = False

    @field_validator("time")
    @classmethod
    def validate_time(cls, v):
        return _clock(v)

    @field_validator("alpha")
    @classmethod
    def validate_alpha(cls, v):
        if v < 1:
            raise ValueError("α debe ser ≥ 1")
        return v

    @field_validator("max_delay")
    @classmethod
    def validate_max_delay(cls, v):
        if v <= 0:
            raise ValueError("el retraso máximo debe ser positivo")
        return v

    @field_validator("beta")
    @classmethod
    def validate_beta(cls, v):
        if v < 0:
            raise ValueError("β no puede ser negativo")
        return v

    @field_validator("emit")
    @classmethod
    def validate_emit(cls, v):
        if v is not None and v not in ("text", "dot"):
            raise ValueError("emit debe ser 'text' o 'dot'")
        return v


class MeatResponse(BaseModel):
    reachable: bool
    esat: Optional[int] = None
    latest_arrival: Optional[float] = None
    expected_arrival: Optional[float] = None
    complete: bool = True
    legs: List[LegResponse] = []
    compact_arcs: int = 0
    rendering: Optional[str] = None
