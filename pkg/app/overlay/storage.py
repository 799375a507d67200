"""Persistencia del índice de overlay como JSON"""

import logging
from pathlib import Path
from typing import Dict, List, Optional, Union

from pydantic import BaseModel, field_validator

from app.errors import IndexMismatchError
from app.overlay.customize import OverlayIndex
from app.overlay.partition import CellPath, MultilevelPartition
from app.timetable.model import Timetable

logger = logging.getLogger(__name__)

FORMAT_VERSION = 1


def cell_key(cell: CellPath) -> str:
    return "/".join(str(i) for i in cell)


def parse_cell_key(key: str) -> CellPath:
    return tuple(int(i) for i in key.split("/")) if key else ()


# ==================== DOCUMENTO DEL ÍNDICE ====================

class OverlayDocument(BaseModel):
    version: int = FORMAT_VERSION
    k: int
    levels: int
    seed: Optional[int] = None
    timetable_hash: str
    partition: List[str]  # ruta de celda de cada parada, "a/b/c"
    cells: Dict[str, List[int]]
    transit: Dict[str, List[int]] = {}

    @field_validator("version")
    @classmethod
    def validate_version(cls, v):
        if v != FORMAT_VERSION:
            raise ValueError(f"versión de índice no soportada: {v}")
        return v

    @field_validator("cells")
    @classmethod
    def validate_cells(cls, v):
        for key, ids in v.items():
            if ids != sorted(ids):
                raise ValueError(f"la celda {key!r} no está ordenada")
        return v


def to_document(index: OverlayIndex) -> OverlayDocument:
    return OverlayDocument(
        k=index.k,
        levels=index.levels,
        seed=index.seed,
        timetable_hash=index.timetable_hash,
        partition=[cell_key(p) for p in index.partition.paths],
        cells={cell_key(c): list(ids) for c, ids in sorted(index.cells.items())},
        transit={cell_key(c): sorted(ids) for c, ids in sorted(index.transit.items())},
    )


def from_document(doc: OverlayDocument) -> OverlayIndex:
    partition = MultilevelPartition(doc.k, doc.levels, tuple(parse_cell_key(p) for p in doc.partition))
    return OverlayIndex(
        partition=partition,
        cells={parse_cell_key(key): tuple(ids) for key, ids in doc.cells.items()},
        transit={parse_cell_key(key): frozenset(ids) for key, ids in doc.transit.items()},
        timetable_hash=doc.timetable_hash,
        seed=doc.seed,
    )


def save_overlay(index: OverlayIndex, path: Union[str, Path]) -> None:
    Path(path).write_text(to_document(index).model_dump_json(), encoding="utf-8")
    logger.info("💾 Índice guardado en %s (%d celdas)", path, len(index.cells))


def load_overlay(path: Union[str, Path], tt: Optional[Timetable] = None) -> OverlayIndex:
    """Carga el índice y, si se pasa el horario, comprueba que sea el mismo"""
    try:
        doc = OverlayDocument.model_validate_json(Path(path).read_text(encoding="utf-8"))
    except ValueError as e:
        raise IndexMismatchError(f"índice ilegible: {e}") from e
    index = from_document(doc)
    if tt is not None:
        index.check(tt)
    return index
