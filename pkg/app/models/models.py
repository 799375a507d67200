import enum
from datetime import datetime

from sqlalchemy import Boolean, Column, DateTime, Float, ForeignKey, Integer, String, Text
from sqlalchemy.orm import relationship

from ..database.database import Base


class EstadoBenchmarkEnum(str, enum.Enum):
    PASSED = "PASSED"
    FAILED = "FAILED"


# Horario subido en formato de texto
class TimetableDocument(Base):
    __tablename__ = "timetables"

    id = Column(Integer, primary_key=True, index=True)
    name = Column(String, nullable=False)
    content = Column(Text, nullable=False)
    content_hash = Column(String(64), nullable=False, index=True)
    synthesize_closure = Column(Boolean, default=False, nullable=False)

    num_stops = Column(Integer, nullable=False)
    num_trips = Column(Integer, nullable=False)
    num_connections = Column(Integer, nullable=False)
    num_footpaths = Column(Integer, nullable=False)

    created_at = Column(DateTime, default=datetime.utcnow)

    benchmark_runs = relationship("BenchmarkRun", back_populates="timetable", cascade="all, delete-orphan")


# Ejecución de la matriz algoritmo × consulta
class BenchmarkRun(Base):
    __tablename__ = "benchmark_runs"

    id = Column(Integer, primary_key=True, index=True)
    timetable_id = Column(Integer, ForeignKey("timetables.id"), nullable=False, index=True)
    name = Column(String, nullable=False)
    seed = Column(Integer, nullable=False)
    config_json = Column(Text, nullable=False)
    timetable_hash = Column(String(64), nullable=False)
    status = Column(String, default=EstadoBenchmarkEnum.PASSED.value, nullable=False)
    mismatches_json = Column(Text, default="[]")
    summaries_json = Column(Text, default="[]")  # una entrada por algoritmo

    created_at = Column(DateTime, default=datetime.utcnow)

    timetable = relationship("TimetableDocument", back_populates="benchmark_runs")
    records = relationship("BenchmarkRecord", back_populates="run", cascade="all, delete-orphan")


class BenchmarkRecord(Base):
    __tablename__ = "benchmark_records"

    id = Column(Integer, primary_key=True, index=True)
    run_id = Column(Integer, ForeignKey("benchmark_runs.id"), nullable=False, index=True)
    algorithm = Column(String, nullable=False, index=True)
    query_index = Column(Integer, nullable=False)
    source = Column(Integer, nullable=False)
    target = Column(Integer, nullable=False)
    time = Column(Integer, nullable=False)
    wall_ms = Column(Float, nullable=False)
    scanned = Column(Integer, nullable=False)
    result_json = Column(Text, nullable=True)

    run = relationship("BenchmarkRun", back_populates="records")
