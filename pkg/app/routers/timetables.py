import logging
from threading import Lock
from typing import Dict, List, Tuple

from fastapi import APIRouter, Depends, HTTPException, status
from sqlalchemy.orm import Session

from app.database.database import get_db
from app.errors import (
    ConnScanError,
    IndexMismatchError,
    InvalidParameterError,
    InvalidStopError,
    TimetableConstraintError,
    TimetableParseError,
)
from app.models.models import TimetableDocument
from app.schemas.timetable import TimetableCreate, TimetableResponse, ValidationResponse, ViolationResponse
from app.timetable.loader import content_hash, load_timetable
from app.timetable.model import Timetable
from app.timetable.validation import validate

logger = logging.getLogger(__name__)

router = APIRouter(prefix="/api/timetables", tags=["Timetables"])

# horarios ya interpretados, por (hash del texto, clausura)
_parsed: Dict[Tuple[str, bool], Timetable] = {}
_parsed_lock = Lock()


def http_error(e: ConnScanError) -> HTTPException:
    """Traduce un error del motor a una respuesta HTTP"""
    if isinstance(e, InvalidStopError):
        return HTTPException(status_code=status.HTTP_404_NOT_FOUND, detail=str(e))
    if isinstance(e, TimetableConstraintError):
        return HTTPException(
            status_code=status.HTTP_400_BAD_REQUEST,
            detail={"message": str(e), "violations": [str(v) for v in e.report.violations]},
        )
    if isinstance(e, (TimetableParseError, InvalidParameterError, IndexMismatchError)):
        return HTTPException(status_code=status.HTTP_400_BAD_REQUEST, detail=str(e))
    logger.error("Error interno del motor: %s", e)
    return HTTPException(status_code=status.HTTP_500_INTERNAL_SERVER_ERROR, detail=str(e))


def get_document(timetable_id: int, db: Session) -> TimetableDocument:
    doc = db.query(TimetableDocument).filter(TimetableDocument.id == timetable_id).first()
    if not doc:
        raise HTTPException(status_code=status.HTTP_404_NOT_FOUND, detail="Horario no encontrado")
    return doc


def parsed_timetable(doc: TimetableDocument) -> Timetable:
    key = (doc.content_hash, doc.synthesize_closure)
    with _parsed_lock:
        tt = _parsed.get(key)
    if tt is None:
        try:
            tt = load_timetable(doc.content, synthesize_closure=doc.synthesize_closure)
        except ConnScanError as e:
            raise http_error(e) from e
        with _parsed_lock:
            _parsed[key] = tt
    return tt


@router.post("", response_model=TimetableResponse, status_code=status.HTTP_201_CREATED)
def upload_timetable(data: TimetableCreate, db: Session = Depends(get_db)):
    """Interpreta, valida y guarda un horario en formato de texto"""
    try:
        tt = load_timetable(data.content, synthesize_closure=data.synthesize_closure)
    except ConnScanError as e:
        raise http_error(e) from e

    doc = TimetableDocument(
        name=data.name,
        content=data.content,
        content_hash=content_hash(data.content),
        synthesize_closure=data.synthesize_closure,
        num_stops=tt.num_stops,
        num_trips=tt.num_trips,
        num_connections=tt.num_connections,
        num_footpaths=len(tt.footpaths),
    )
    db.add(doc)
    db.commit()
    db.refresh(doc)
    with _parsed_lock:
        _parsed[(doc.content_hash, doc.synthesize_closure)] = tt
    logger.info("💾 Horario %r guardado con id %d: %r", doc.name, doc.id, tt)
    return doc


@router.get("", response_model=List[TimetableResponse])
def list_timetables(db: Session = Depends(get_db)):
    return db.query(TimetableDocument).order_by(TimetableDocument.id).all()


@router.get("/{timetable_id}", response_model=TimetableResponse)
def get_timetable(timetable_id: int, db: Session = Depends(get_db)):
    return get_document(timetable_id, db)


@router.get("/{timetable_id}/validation", response_model=ValidationResponse)
def get_validation(timetable_id: int, db: Session = Depends(get_db)):
    """Vuelve a comprobar los invariantes del horario guardado"""
    report = validate(parsed_timetable(get_document(timetable_id, db)))
    return ValidationResponse(
        ok=report.ok,
        violations=[ViolationResponse(kind=v.kind, message=v.message, record=v.record) for v in report],
    )
