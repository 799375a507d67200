from datetime import datetime
from typing import Any, Dict, List

from pydantic import BaseModel, field_validator


class BenchRunCreate(BaseModel):
    timetable_id: int
    config: str  # YAML

    @field_validator("config")
    @classmethod
    def validate_config(cls, v):
        if not v.strip():
            raise ValueError("la configuración está vacía")
        return v


class BenchRecordResponse(BaseModel):
    algorithm: str
    query_index: int
    source: int
    target: int
    time: int
    wall_ms: float
    scanned: int

    class Config:
        from_attributes = True


class BenchRunResponse(BaseModel):
    id: int
    timetable_id: int
    name: str
    seed: int
    status: str
    timetable_hash: str
    config: Dict[str, Any]
    mismatches: List[str]
    summaries: List[Dict[str, Any]]
    created_at: datetime


class BenchRunDetail(BenchRunResponse):
    records: List[BenchRecordResponse] = []
