"""Subconjunto de conexiones de una consulta acelerada"""

import heapq
from bisect import bisect_left
from itertools import islice
from typing import Iterator, List, Optional, Sequence, Union

from app.overlay.customize import OverlayIndex
from app.overlay.partition import CellPath
from app.timetable.model import Timetable


def query_cells(overlay: OverlayIndex, s: int, t: int) -> List[CellPath]:
    """Celdas que contienen al origen o al destino, raíz incluida"""
    partition = overlay.partition
    return sorted(set(partition.cell_chain(s)) | set(partition.cell_chain(t)))


def merge_two(a: Sequence[int], b: Sequence[int]) -> List[int]:
    result = []
    i = j = 0
    while i < len(a) and j < len(b):
        if a[i] <= b[j]:
            result.append(a[i])
            i += 1
        else:
            result.append(b[j])
            j += 1
    result.extend(a[i:])
    result.extend(b[j:])
    return result


def assemble_connection_subset(
    overlay: OverlayIndex,
    tt: Timetable,
    s: int,
    t: int,
    from_time: Optional[int] = None,
) -> Union[List[int], Iterator[int]]:
    """
    Sin `from_time`: fusión de dos en dos de todas las secuencias (lista).
    Con `from_time`: fusión k-way perezosa desde la primera salida ≥ from_time.
    """
    tt.check_stop(s)
    tt.check_stop(t)
    sequences = [overlay.cells[cell] for cell in query_cells(overlay, s, t) if overlay.cells.get(cell)]
    if from_time is None:
        merged: List[int] = []
        for seq in sequences:
            merged = merge_two(merged, seq)
        return merged

    def dep_time(cid: int) -> int:
        return tt.connections[cid].dep_time

    starts = [islice(seq, bisect_left(seq, from_time, key=dep_time), None) for seq in sequences]
    return heapq.merge(*starts)
