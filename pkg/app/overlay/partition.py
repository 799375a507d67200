"""
Partición multinivel de las paradas.

El grafo de paradas es no dirigido y el peso de una arista es el número de
conexiones entre sus extremos. Las paradas unidas por caminatas se sueldan en
un único nodo para que ninguna caminata cruce el borde de una celda.

Cada nivel reparte las paradas de una celda en k hijas: regiones que crecen
desde semillas alejadas entre sí y después un refinamiento por ganancia al
estilo Fiduccia–Mattheyses.
"""

import logging
import math
from collections import deque
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import networkx as nx
import numpy as np

from app.config import PARTITION_IMBALANCE
from app.errors import InvalidParameterError, PartitionInfeasibleError
from app.timetable.closure import footpath_components
from app.timetable.model import Timetable

logger = logging.getLogger(__name__)

CellPath = Tuple[int, ...]

REFINEMENT_PASSES = 10


@dataclass(frozen=True)
class MultilevelPartition:
    k: int
    levels: int
    # ruta de celdas de cada parada, de la celda superior a la inferior
    paths: Tuple[CellPath, ...]

    def cell_of(self, stop: int, level: Optional[int] = None) -> CellPath:
        """Celda de la parada en `level` (0 = raíz); por defecto la inferior"""
        level = self.levels if level is None else level
        return self.paths[stop][:level]

    def cell_chain(self, stop: int) -> List[CellPath]:
        """Celdas que contienen la parada, de la raíz a la inferior"""
        path = self.paths[stop]
        return [path[:i] for i in range(self.levels + 1)]

    def cells(self, level: int) -> List[CellPath]:
        return sorted({path[:level] for path in self.paths})

    def members(self, cell: CellPath) -> List[int]:
        n = len(cell)
        return [stop for stop, path in enumerate(self.paths) if path[:n] == cell]

    def contains(self, cell: CellPath, stop: int) -> bool:
        return self.paths[stop][: len(cell)] == cell


def stop_graph(tt: Timetable) -> nx.Graph:
    graph = nx.Graph()
    graph.add_nodes_from(range(tt.num_stops))
    for c in tt.connections:
        if graph.has_edge(c.dep_stop, c.arr_stop):
            graph[c.dep_stop][c.arr_stop]["weight"] += 1
        else:
            graph.add_edge(c.dep_stop, c.arr_stop, weight=1)
    return graph


def _welded_graph(tt: Timetable) -> Tuple[nx.Graph, List[List[int]]]:
    """Grafo de componentes a pie; el peso de nodo es el número de paradas"""
    components = footpath_components(tt)
    component = {}
    for idx, members in enumerate(components):
        for stop in members:
            component[stop] = idx
    welded = nx.Graph()
    for idx, members in enumerate(components):
        welded.add_node(idx, size=len(members))
    for a, b, data in stop_graph(tt).edges(data=True):
        ca, cb = component[a], component[b]
        if ca == cb:
            continue
        if welded.has_edge(ca, cb):
            welded[ca][cb]["weight"] += data["weight"]
        else:
            welded.add_edge(ca, cb, weight=data["weight"])
    return welded, components


def cut_weight(tt: Timetable, partition: MultilevelPartition, level: Optional[int] = None) -> int:
    """Peso de las aristas cuyos extremos caen en celdas distintas del nivel"""
    total = 0
    for a, b, data in stop_graph(tt).edges(data=True):
        if partition.cell_of(a, level) != partition.cell_of(b, level):
            total += data["weight"]
    return total


def _size(graph: nx.Graph, nodes) -> int:
    return sum(graph.nodes[n]["size"] for n in nodes)


def _pick_seeds(graph: nx.Graph, nodes: List[int], k: int, rng: np.random.Generator) -> List[int]:
    """Primera semilla al azar; las demás, las más lejanas en saltos de las ya elegidas"""
    seeds = [nodes[int(rng.integers(len(nodes)))]]
    node_set = set(nodes)
    while len(seeds) < min(k, len(nodes)):
        distance = {n: math.inf for n in nodes}
        queue = deque()
        for seed in seeds:
            distance[seed] = 0
            queue.append(seed)
        while queue:
            u = queue.popleft()
            for v in graph.neighbors(u):
                if v in node_set and distance[v] == math.inf:
                    distance[v] = distance[u] + 1
                    queue.append(v)
        candidates = [n for n in nodes if n not in seeds]
        seeds.append(max(candidates, key=lambda n: (distance[n], -n)))
    return seeds


def _grow_regions(
    graph: nx.Graph, nodes: List[int], k: int, target: float, limit: float, rng: np.random.Generator
) -> Dict[int, int]:
    node_set = set(nodes)
    part: Dict[int, int] = {}
    sizes = [0] * k
    # conectividad de cada nodo libre con cada región
    gain: List[Dict[int, int]] = [dict() for _ in range(k)]

    def assign(node: int, p: int) -> None:
        part[node] = p
        sizes[p] += graph.nodes[node]["size"]
        for q in range(k):
            gain[q].pop(node, None)
        for v, data in graph[node].items():
            if v in node_set and v not in part:
                gain[p][v] = gain[p].get(v, 0) + data["weight"]

    for p, seed in enumerate(_pick_seeds(graph, nodes, k, rng)):
        assign(seed, p)

    active = [True] * k
    while len(part) < len(nodes) and any(active):
        for p in range(k):
            if not active[p] or len(part) == len(nodes):
                continue
            if sizes[p] >= target:
                active[p] = False
                continue
            fits = [v for v in gain[p] if sizes[p] + graph.nodes[v]["size"] <= limit]
            if fits:
                node = max(fits, key=lambda v: (gain[p][v], -v))
            else:
                # región sin frontera: salta a la parada libre más pequeña
                free = [v for v in nodes if v not in part and sizes[p] + graph.nodes[v]["size"] <= limit]
                if not free:
                    active[p] = False
                    continue
                node = min(free)
            assign(node, p)

    for node in nodes:
        if node not in part:
            p = min(range(k), key=lambda q: (sizes[q], q))
            part[node] = p
            sizes[p] += graph.nodes[node]["size"]
    return part


def _refine(graph: nx.Graph, nodes: List[int], part: Dict[int, int], k: int, limit: float) -> None:
    """Movimientos de ganancia positiva sobre los nodos frontera hasta estabilizar"""
    node_set = set(nodes)
    sizes = [0] * k
    for node in nodes:
        sizes[part[node]] += graph.nodes[node]["size"]
    for _ in range(REFINEMENT_PASSES):
        moved = False
        for node in nodes:
            own = part[node]
            weights = [0] * k
            for v, data in graph[node].items():
                if v in node_set:
                    weights[part[v]] += data["weight"]
            size = graph.nodes[node]["size"]
            best, best_gain = own, 0
            for p in range(k):
                if p == own or sizes[p] + size > limit or sizes[own] == size:
                    continue
                gain = weights[p] - weights[own]
                if gain > best_gain:
                    best, best_gain = p, gain
            if best != own:
                part[node] = best
                sizes[own] -= size
                sizes[best] += size
                moved = True
        if not moved:
            break


def _split(
    graph: nx.Graph,
    nodes: List[int],
    k: int,
    depth: int,
    levels: int,
    imbalance: float,
    rng: np.random.Generator,
    prefix: CellPath,
    out: Dict[int, CellPath],
) -> None:
    if depth == levels:
        for node in nodes:
            out[node] = prefix
        return
    if not nodes:
        return
    total = _size(graph, nodes)
    target = math.ceil(total / k)
    limit = (1 + imbalance) * target
    part = _grow_regions(graph, nodes, k, target, limit, rng)
    _refine(graph, nodes, part, k, limit)
    for p in range(k):
        children = sorted(n for n in nodes if part[n] == p)
        _split(graph, children, k, depth + 1, levels, imbalance, rng, prefix + (p,), out)


def partition_stops(
    tt: Timetable,
    k: int,
    levels: int,
    seed: int = 0,
    imbalance: float = PARTITION_IMBALANCE,
) -> MultilevelPartition:
    """Partición recursiva en k celdas por nivel, `levels` niveles"""
    if k < 1 or levels < 1:
        raise InvalidParameterError(f"k y niveles deben ser positivos: k={k}, l={levels}")
    if imbalance < 0:
        raise InvalidParameterError(f"desbalance negativo: {imbalance}")
    graph, components = _welded_graph(tt)
    budget = (1 + imbalance) * math.ceil(tt.num_stops / k**levels)
    largest = max((len(c) for c in components), default=0)
    if largest > budget:
        raise PartitionInfeasibleError(
            f"un grupo de {largest} paradas unidas a pie no cabe en una celda de {budget:.0f}"
        )

    rng = np.random.default_rng(seed)
    assignment: Dict[int, CellPath] = {}
    _split(graph, sorted(graph.nodes), k, 0, levels, imbalance, rng, (), assignment)
    paths: List[CellPath] = [()] * tt.num_stops
    for idx, members in enumerate(components):
        for stop in members:
            paths[stop] = assignment[idx]
    partition = MultilevelPartition(k, levels, tuple(paths))
    logger.debug("partición k=%d l=%d: corte inferior %d", k, levels, cut_weight(tt, partition))
    return partition


def check_partition(tt: Timetable, partition: MultilevelPartition) -> None:
    if len(partition.paths) != tt.num_stops:
        raise PartitionInfeasibleError(
            f"la partición cubre {len(partition.paths)} paradas de {tt.num_stops}"
        )
    for stop, path in enumerate(partition.paths):
        if len(path) != partition.levels or any(not 0 <= i < partition.k for i in path):
            raise PartitionInfeasibleError(f"ruta de celda inválida para {tt.stops[stop].code}: {path}")
    for f in tt.footpaths:
        if partition.paths[f.dep_stop] != partition.paths[f.arr_stop]:
            raise PartitionInfeasibleError(
                f"la caminata {tt.stops[f.dep_stop].code}→{tt.stops[f.arr_stop].code} cruza celdas"
            )


def format_partition(tt: Timetable, partition: MultilevelPartition) -> str:
    lines = [f"# k={partition.k} levels={partition.levels}"]
    for stop, path in enumerate(partition.paths):
        lines.append(f"P {tt.stops[stop].code} {'/'.join(str(i) for i in path)}")
    return "\n".join(lines) + "\n"


def parse_partition(tt: Timetable, text: str, k: Optional[int] = None) -> MultilevelPartition:
    """Lee líneas `P <parada> <a/b/c>`; k se deduce si no se indica"""
    paths: List[Optional[CellPath]] = [None] * tt.num_stops
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 3 or parts[0] != "P":
            raise InvalidParameterError(f"línea {line_no} de la partición inválida: {raw!r}")
        try:
            path = tuple(int(i) for i in parts[2].split("/"))
        except ValueError:
            raise InvalidParameterError(f"línea {line_no}: ruta de celda inválida {parts[2]!r}") from None
        paths[tt.stop_id(parts[1])] = path
    missing = [tt.stops[i].code for i, p in enumerate(paths) if p is None]
    if missing:
        raise PartitionInfeasibleError(f"paradas sin celda: {', '.join(missing[:5])}")
    levels = len(paths[0])
    if k is None:
        k = 1 + max(max(p) for p in paths if p) if levels else 1
    partition = MultilevelPartition(k, levels, tuple(paths))
    check_partition(tt, partition)
    return partition


def single_cell_partition(tt: Timetable) -> MultilevelPartition:
    """Una celda con todas las paradas (k = 1, un nivel)"""
    return MultilevelPartition(1, 1, tuple((0,) for _ in range(tt.num_stops)))
