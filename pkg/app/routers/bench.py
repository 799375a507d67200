import json
import logging
from typing import List

from fastapi import APIRouter, Depends, HTTPException, status
from sqlalchemy.orm import Session

from app.database.database import get_db
from app.errors import ConnScanError
from app.harness.benchmark import load_benchmark_config, run_benchmark
from app.models.models import BenchmarkRecord, BenchmarkRun
from app.routers.timetables import get_document, http_error, parsed_timetable
from app.schemas.bench import BenchRecordResponse, BenchRunCreate, BenchRunDetail, BenchRunResponse

logger = logging.getLogger(__name__)

router = APIRouter(prefix="/api/bench", tags=["Benchmark"])


def _run_response(run: BenchmarkRun) -> dict:
    return {
        "id": run.id,
        "timetable_id": run.timetable_id,
        "name": run.name,
        "seed": run.seed,
        "status": run.status,
        "timetable_hash": run.timetable_hash,
        "config": json.loads(run.config_json),
        "mismatches": json.loads(run.mismatches_json or "[]"),
        "summaries": json.loads(run.summaries_json or "[]"),
        "created_at": run.created_at,
    }


@router.post("", response_model=BenchRunResponse, status_code=status.HTTP_201_CREATED)
def create_run(data: BenchRunCreate, db: Session = Depends(get_db)):
    """Ejecuta el benchmark sobre un horario guardado y persiste el informe"""
    doc = get_document(data.timetable_id, db)
    tt = parsed_timetable(doc)
    try:
        config = load_benchmark_config(data.config)
        report = run_benchmark(tt, config)
    except ConnScanError as e:
        raise http_error(e) from e

    run = BenchmarkRun(
        timetable_id=doc.id,
        name=config.name,
        seed=config.seed,
        config_json=json.dumps(config.model_dump()),
        timetable_hash=report.timetable_hash,
        status=report.status,
        mismatches_json=json.dumps(report.mismatches),
        summaries_json=json.dumps([s.as_dict() for s in report.summaries.values()]),
    )
    for r in report.records:
        run.records.append(
            BenchmarkRecord(
                algorithm=r.algorithm,
                query_index=r.query,
                source=r.source,
                target=r.target,
                time=r.time,
                wall_ms=r.wall_ms,
                scanned=r.scanned,
                result_json=json.dumps(r.result),
            )
        )
    db.add(run)
    db.commit()
    db.refresh(run)
    logger.info("💾 Benchmark %d guardado: %s, %d registros", run.id, run.status, len(report.records))
    return _run_response(run)


@router.get("", response_model=List[BenchRunResponse])
def list_runs(db: Session = Depends(get_db)):
    runs = db.query(BenchmarkRun).order_by(BenchmarkRun.id.desc()).all()
    return [_run_response(run) for run in runs]


@router.get("/{run_id}", response_model=BenchRunDetail)
def get_run(run_id: int, db: Session = Depends(get_db)):
    run = db.query(BenchmarkRun).filter(BenchmarkRun.id == run_id).first()
    if not run:
        raise HTTPException(status_code=status.HTTP_404_NOT_FOUND, detail="Benchmark no encontrado")
    records = (
        db.query(BenchmarkRecord)
        .filter(BenchmarkRecord.run_id == run.id)
        .order_by(BenchmarkRecord.algorithm, BenchmarkRecord.query_index)
        .all()
    )
    return {**_run_response(run), "records": [BenchRecordResponse.model_validate(r) for r in records]}
