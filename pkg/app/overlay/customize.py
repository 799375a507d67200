"""
Personalización del overlay, de las celdas inferiores a la raíz.

Conjunto de larga distancia L_z:
    celda inferior: conexiones que salen de una parada de z
    resto: unión de los conjuntos de tránsito de las hijas
Conjunto de tránsito T_z ⊆ L_z: subidas y bajadas de los viajes de mínimo
transbordo entre cada conexión que entra en z y cada conexión de L_z que sale.

Al final cada conexión se guarda solo en la celda más alta cuyo L la
contiene; los conjuntos resultantes son disjuntos y cubren todo el horario.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Optional, Sequence, Set, Tuple

from app.errors import IndexMismatchError
from app.overlay.partition import CellPath, MultilevelPartition, check_partition
from app.overlay.transfers import min_transfer_profiles
from app.timetable.loader import timetable_hash
from app.timetable.model import Timetable

logger = logging.getLogger(__name__)


@dataclass
class OverlayIndex:
    partition: MultilevelPartition
    # conexiones de larga distancia adelgazadas, ordenadas por id
    cells: Dict[CellPath, Tuple[int, ...]]
    transit: Dict[CellPath, FrozenSet[int]] = field(default_factory=dict)
    timetable_hash: str = ""
    seed: Optional[int] = None

    @property
    def k(self) -> int:
        return self.partition.k

    @property
    def levels(self) -> int:
        return self.partition.levels

    def total_connections(self) -> int:
        return sum(len(ids) for ids in self.cells.values())

    def check(self, tt: Timetable) -> None:
        if self.timetable_hash and self.timetable_hash != timetable_hash(tt):
            raise IndexMismatchError("el índice se construyó para otro horario")
        if len(self.partition.paths) != tt.num_stops:
            raise IndexMismatchError("la partición del índice no coincide con las paradas del horario")


def _transit_set(
    tt: Timetable,
    cell_stops: FrozenSet[int],
    long_distance: Sequence[int],
    entering: Sequence[int],
) -> FrozenSet[int]:
    scan_set = sorted(set(long_distance) | set(entering))
    exits = [cid for cid in long_distance if tt.connections[cid].arr_stop not in cell_stops]
    transit: Set[int] = set()
    for exit_id in exits:
        sources = [cid for cid in entering if cid < exit_id]
        if not sources:
            continue
        transit |= min_transfer_profiles(tt, cell_stops, scan_set, exit_id, sources).marked
    return frozenset(transit & set(long_distance))


def customize(
    tt: Timetable,
    partition: MultilevelPartition,
    threads: int = 1,
    seed: Optional[int] = None,
) -> OverlayIndex:
    check_partition(tt, partition)
    levels = partition.levels

    long_distance: Dict[CellPath, List[int]] = {}
    for c in tt.connections:
        long_distance.setdefault(partition.cell_of(c.dep_stop), []).append(c.id)

    transit: Dict[CellPath, FrozenSet[int]] = {}
    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        for level in range(levels, 0, -1):
            cells = partition.cells(level)
            if level < levels:
                for cell in cells:
                    merged: Set[int] = set()
                    for child, ids in transit.items():
                        if len(child) == level + 1 and child[:level] == cell:
                            merged |= ids
                    long_distance[cell] = sorted(merged)

            members = {cell: frozenset(partition.members(cell)) for cell in cells}
            entering: Dict[CellPath, List[int]] = {cell: [] for cell in cells}
            for c in tt.connections:
                arr_cell = partition.cell_of(c.arr_stop, level)
                if partition.cell_of(c.dep_stop, level) != arr_cell:
                    entering[arr_cell].append(c.id)

            # primero las celdas con más borde
            order = sorted(cells, key=lambda z: (-len(entering[z]), z))
            futures = {
                cell: pool.submit(
                    _transit_set, tt, members[cell], long_distance.get(cell, []), entering[cell]
                )
                for cell in order
            }
            for cell in cells:
                transit[cell] = futures[cell].result()
            logger.info(
                "🧩 Nivel %d personalizado: %d celdas, %d conexiones de tránsito",
                level, len(cells), sum(len(transit[z]) for z in cells),
            )

    root: Set[int] = set()
    for cell in partition.cells(1):
        root |= transit[cell]
    long_distance[()] = sorted(root)

    highest: Dict[int, CellPath] = {}
    for level in range(levels + 1):
        for cell in partition.cells(level):
            for cid in long_distance.get(cell, []):
                highest.setdefault(cid, cell)
    thinned: Dict[CellPath, List[int]] = {}
    for cid in range(tt.num_connections):
        thinned.setdefault(highest[cid], []).append(cid)

    return OverlayIndex(
        partition=partition,
        cells={cell: tuple(ids) for cell, ids in thinned.items()},
        transit=transit,
        timetable_hash=timetable_hash(tt),
        seed=seed,
    )
