"""
Banco de pruebas: matriz algoritmo × consulta con tiempos, contadores y
checksums.

Los algoritmos del mismo grupo deben dar el mismo checksum; si no, el
informe queda FAILED. El tiempo medido no incluye la carga del horario ni la
construcción del overlay.
"""

import hashlib
import json
import logging
import statistics
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Tuple

import numpy as np
import yaml
from pydantic import BaseModel, ValidationError, field_validator

from app.config import DEFAULT_LEG_MAX, PARTITION_IMBALANCE
from app.ea.scan import EaOptions, scan_earliest_arrival
from app.errors import InvalidParameterError
from app.harness.generators import GENERATOR_KINDS, grid_of_cities, random_dag, risky_transfer
from app.harness.queries import Query, generate_queries
from app.overlay.customize import OverlayIndex, customize
from app.overlay.partition import partition_stops
from app.overlay.query import accel_earliest_arrival, accel_query, accel_range
from app.profile.scan import (
    ProfileOptions,
    RangeResult,
    ea_profile,
    filter_range,
    pareto_profile,
    pareto_tuples,
    range_query,
)
from app.timetable.loader import timetable_hash
from app.timetable.model import Timetable

logger = logging.getLogger(__name__)

PASSED = "PASSED"
FAILED = "FAILED"


# ==================== CONFIGURACIÓN ====================

class OverlayConfig(BaseModel):
    k: int = 2
    levels: int = 1
    seed: int = 0
    imbalance: float = PARTITION_IMBALANCE


class InstanceConfig(BaseModel):
    kind: str = "grid"
    seed: int = 0
    params: Dict[str, Any] = {}

    @field_validator("kind")
    @classmethod
    def validate_kind(cls, v):
        if v not in GENERATOR_KINDS:
            raise ValueError(f"generador desconocido: {v}")
        return v


class BenchmarkConfig(BaseModel):
    name: str = "bench"
    seed: int = 0
    queries: int = 100
    algorithms: List[str] = ["ea", "ea-nostop"]
    leg_max: int = DEFAULT_LEG_MAX
    threads: int = 1
    overlay: Optional[OverlayConfig] = None
    instance: Optional[InstanceConfig] = None

    @field_validator("algorithms")
    @classmethod
    def validate_algorithms(cls, v):
        unknown = [name for name in v if name not in ALGORITHMS]
        if unknown:
            raise ValueError(f"algoritmos desconocidos: {', '.join(unknown)}")
        if not v:
            raise ValueError("la lista de algoritmos está vacía")
        return v

    @field_validator("queries")
    @classmethod
    def validate_queries(cls, v):
        if v < 0:
            raise ValueError("el número de consultas no puede ser negativo")
        return v

    @field_validator("threads", "leg_max")
    @classmethod
    def validate_positive(cls, v):
        if v < 1:
            raise ValueError("debe ser ≥ 1")
        return v

    @property
    def needs_overlay(self) -> bool:
        return any(name.endswith("-accel") for name in self.algorithms)


def load_benchmark_config(text: str) -> BenchmarkConfig:
    """Configuración en YAML (o JSON, que también es YAML)"""
    try:
        data = yaml.safe_load(text) or {}
    except yaml.YAMLError as e:
        raise InvalidParameterError(f"configuración ilegible: {e}") from e
    if not isinstance(data, dict):
        raise InvalidParameterError("la configuración debe ser un mapeo")
    try:
        return BenchmarkConfig.model_validate(data)
    except ValidationError as e:
        raise InvalidParameterError(f"configuración inválida: {e}") from e


def build_instance(config: InstanceConfig) -> Timetable:
    if config.kind == "grid":
        return grid_of_cities(seed=config.seed, **config.params)
    if config.kind == "random":
        return random_dag(seed=config.seed, **config.params)
    return risky_transfer(**config.params)


# ==================== ALGORITMOS ====================

@dataclass
class BenchContext:
    tt: Timetable
    config: BenchmarkConfig
    overlay: Optional[OverlayIndex] = None


Runner = Callable[[BenchContext, Query], Tuple[Any, int]]


def _ea(opts: EaOptions) -> Runner:
    def run(ctx: BenchContext, q: Query) -> Tuple[Any, int]:
        result = scan_earliest_arrival(ctx.tt, q.source, q.time, q.target, opts)
        return result.arrival, result.scanned
    return run


def _ea_accel(ctx: BenchContext, q: Query) -> Tuple[Any, int]:
    result = accel_earliest_arrival(ctx.overlay, ctx.tt, q.source, q.time, q.target)
    return result.arrival, result.scanned


def _scalar_pairs(store, stop: int) -> List[List[int]]:
    return [[int(dep), int(value)] for dep, value in store.pairs(stop)]


def _profile(ctx: BenchContext, q: Query) -> Tuple[Any, int]:
    store = ea_profile(ctx.tt, q.target, ProfileOptions(source=q.source))
    return _scalar_pairs(store, q.source), store.scanned


def _profile_accel(ctx: BenchContext, q: Query) -> Tuple[Any, int]:
    store = accel_query(ctx.overlay, ctx.tt, q.source, None, q.target, "ea-profile")
    return _scalar_pairs(store, q.source), store.scanned


def _range_answer(result: RangeResult, q: Query) -> Any:
    if not result.reachable:
        return None
    pairs = filter_range(result.store.pairs(q.source), q.time, result.horizon)
    return [[int(dep), int(value)] for dep, value in pairs]


def _range(ctx: BenchContext, q: Query) -> Tuple[Any, int]:
    result = range_query(ctx.tt, q.source, q.time, q.target)
    return _range_answer(result, q), result.scanned


def _range_accel(ctx: BenchContext, q: Query) -> Tuple[Any, int]:
    result = accel_range(ctx.overlay, ctx.tt, q.source, q.time, q.target)
    return _range_answer(result, q), result.scanned


def _pareto(ctx: BenchContext, q: Query) -> Tuple[Any, int]:
    store = pareto_profile(ctx.tt, q.target, ctx.config.leg_max, ProfileOptions(source=q.source))
    return [list(p) for p in pareto_tuples(store.pairs(q.source))], store.scanned


def _pareto_accel(ctx: BenchContext, q: Query) -> Tuple[Any, int]:
    store = accel_query(
        ctx.overlay, ctx.tt, q.source, None, q.target, "pareto-profile", leg_max=ctx.config.leg_max
    )
    return [list(p) for p in pareto_tuples(store.pairs(q.source))], store.scanned


# nombre → (grupo de equivalencia, ejecutor)
ALGORITHMS: Dict[str, Tuple[str, Runner]] = {
    "ea": ("ea", _ea(EaOptions())),
    "ea-nostop": ("ea", _ea(EaOptions(stop_criterion=False))),
    "ea-plain": ("ea", _ea(EaOptions(start_criterion=False, stop_criterion=False, limited_walking=False))),
    "ea-accel": ("ea", _ea_accel),
    "profile": ("profile", _profile),
    "profile-accel": ("profile", _profile_accel),
    "range": ("range", _range),
    "range-accel": ("range", _range_accel),
    "pareto": ("pareto", _pareto),
    "pareto-accel": ("pareto", _pareto_accel),
}


# ==================== INFORME ====================

@dataclass
class BenchmarkRecord:
    algorithm: str
    query: int
    source: int
    target: int
    time: int
    wall_ms: float
    scanned: int
    result: Any

    def as_dict(self) -> Dict[str, Any]:
        return {
            "type": "record",
            "algorithm": self.algorithm,
            "query": self.query,
            "source": self.source,
            "target": self.target,
            "time": self.time,
            "wall_ms": round(self.wall_ms, 4),
            "scanned": self.scanned,
            "result": self.result,
        }


@dataclass
class AlgorithmSummary:
    algorithm: str
    group: str
    mean_ms: float
    median_ms: float
    p90_ms: float
    mean_scanned: float
    checksum: str

    def as_dict(self) -> Dict[str, Any]:
        return {"type": "summary", **self.__dict__}


@dataclass
class BenchmarkReport:
    status: str
    timetable_hash: str
    seed: int
    config: BenchmarkConfig
    records: List[BenchmarkRecord] = field(default_factory=list)
    summaries: Dict[str, AlgorithmSummary] = field(default_factory=dict)
    mismatches: List[str] = field(default_factory=list)

    @property
    def failed(self) -> bool:
        return self.status == FAILED

    def records_of(self, algorithm: str) -> List[BenchmarkRecord]:
        return [r for r in self.records if r.algorithm == algorithm]

    def to_json_lines(self) -> str:
        lines = [
            json.dumps({
                "type": "header",
                "timetable_hash": self.timetable_hash,
                "seed": self.seed,
                "config": self.config.model_dump(),
            })
        ]
        lines.extend(json.dumps(r.as_dict()) for r in self.records)
        lines.extend(json.dumps(s.as_dict()) for s in self.summaries.values())
        lines.append(json.dumps({"type": "status", "status": self.status, "mismatches": self.mismatches}))
        return "\n".join(lines) + "\n"


def checksum(results: List[Any]) -> str:
    payload = json.dumps(results, separators=(",", ":"), sort_keys=True)
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


def _timed(runner: Runner, ctx: BenchContext, q: Query) -> Tuple[Any, int, float]:
    start = time.perf_counter()
    result, scanned = runner(ctx, q)
    return result, scanned, (time.perf_counter() - start) * 1000.0


def build_overlay(tt: Timetable, config: OverlayConfig, threads: int = 1) -> OverlayIndex:
    partition = partition_stops(tt, config.k, config.levels, seed=config.seed, imbalance=config.imbalance)
    return customize(tt, partition, threads=threads, seed=config.seed)


def run_benchmark(
    tt: Timetable,
    config: BenchmarkConfig,
    overlay: Optional[OverlayIndex] = None,
) -> BenchmarkReport:
    queries = generate_queries(tt, config.queries, config.seed)
    if config.needs_overlay and overlay is None:
        overlay = build_overlay(tt, config.overlay or OverlayConfig(), config.threads)
    ctx = BenchContext(tt, config, overlay)
    report = BenchmarkReport(PASSED, timetable_hash(tt), config.seed, config)
    logger.info("📥 Benchmark %r: %d consultas × %d algoritmos", config.name, len(queries), len(config.algorithms))

    answers: Dict[str, List[Any]] = {}
    with ThreadPoolExecutor(max_workers=config.threads) as pool:
        for name in config.algorithms:
            group, runner = ALGORITHMS[name]
            outcomes = list(pool.map(lambda q: _timed(runner, ctx, q), queries))
            times = []
            for i, (q, (result, scanned, wall_ms)) in enumerate(zip(queries, outcomes)):
                report.records.append(
                    BenchmarkRecord(name, i, q.source, q.target, q.time, wall_ms, scanned, result)
                )
                times.append(wall_ms)
            answers[name] = [result for result, _, _ in outcomes]
            report.summaries[name] = AlgorithmSummary(
                algorithm=name,
                group=group,
                mean_ms=statistics.fmean(times) if times else 0.0,
                median_ms=statistics.median(times) if times else 0.0,
                p90_ms=float(np.percentile(times, 90)) if times else 0.0,
                mean_scanned=statistics.fmean(s for _, s, _ in outcomes) if outcomes else 0.0,
                checksum=checksum(answers[name]),
            )
            logger.info("🔁 %s: media %.3f ms, mediana %.3f ms", name, report.summaries[name].mean_ms,
                        report.summaries[name].median_ms)

    by_group: Dict[str, List[AlgorithmSummary]] = {}
    for summary in report.summaries.values():
        by_group.setdefault(summary.group, []).append(summary)
    for group, members in by_group.items():
        reference = members[0]
        for other in members[1:]:
            if other.checksum != reference.checksum:
                report.mismatches.append(f"{group}: {reference.algorithm} ≠ {other.algorithm}")
    if report.mismatches:
        report.status = FAILED
        logger.error("🛑 Benchmark %r FAILED: %s", config.name, "; ".join(report.mismatches))
    return report
