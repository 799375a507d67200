import logging
from typing import Dict, List, Tuple

import networkx as nx

logger = logging.getLogger(__name__)


def close_footpaths(
    change_times: List[int],
    footpaths: Dict[Tuple[int, int], int],
) -> Tuple[List[int], Dict[Tuple[int, int], int]]:
    """
    Clausura min-plus del grafo de caminatas.

    Cada par conectado recibe la duración del camino más corto; el lazo de una
    parada se acorta si existe un ciclo más barato que su tiempo de cambio.

    Returns:
        (tiempos de cambio reparados, caminatas sin lazos)
    """
    graph = nx.DiGraph()
    for (a, b), dur in footpaths.items():
        if a != b:
            graph.add_edge(a, b, dur=dur)

    closed: Dict[Tuple[int, int], int] = {}
    changes = list(change_times)
    for a in graph.nodes:
        lengths = nx.single_source_dijkstra_path_length(graph, a, weight="dur")
        for b, dist in lengths.items():
            if b != a:
                closed[(a, b)] = int(dist)
        cycle = min(
            (lengths[u] + data["dur"] for u, _, data in graph.in_edges(a, data=True) if u in lengths),
            default=None,
        )
        if cycle is not None and cycle < changes[a]:
            logger.debug("lazo de %s acortado de %s a %s", a, changes[a], cycle)
            changes[a] = int(cycle)

    added = len(closed) - sum(1 for a, b in footpaths if a != b)
    logger.info("🔁 Clausura de caminatas: %d aristas nuevas", added)
    return changes, closed


def footpath_components(tt) -> List[List[int]]:
    """Componentes conexas del grafo de caminatas sin lazos, ordenadas por su menor parada"""
    graph = nx.Graph()
    graph.add_nodes_from(range(tt.num_stops))
    graph.add_edges_from((f.dep_stop, f.arr_stop) for f in tt.footpaths if not f.is_loop)
    components = [sorted(c) for c in nx.connected_components(graph)]
    components.sort(key=lambda c: c[0])
    return components
