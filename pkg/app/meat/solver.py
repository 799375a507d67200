import logging
from dataclasses import dataclass
from typing import Optional

from app.errors import InvalidParameterError
from app.meat.contraction import ContractedTimetable, contract_footpaths
from app.meat.delay import DelayModel
from app.meat.graph import (
    CompactDecisionGraph,
    DecisionGraph,
    compact_representation,
    extract_decision_graph,
)
from app.meat.scan import EatProfileStore, esat, meat_profile_scan, reachable_connections
from app.timetable.model import Timetable

logger = logging.getLogger(__name__)


@dataclass
class MeatSolution:
    graph: DecisionGraph
    compact: CompactDecisionGraph
    esat: int
    latest_arrival: float
    contracted: ContractedTimetable
    store: EatProfileStore

    @property
    def timetable(self) -> Timetable:
        return self.contracted.timetable

    @property
    def expected_arrival(self) -> float:
        return self.graph.expected_arrival


def _largest_window(
    store: EatProfileStore, s: int, tau_s: int, arc_budget: int
) -> Optional[DecisionGraph]:
    """Mayor κ entero cuyo grafo compacto no pasa de `arc_budget` arcos"""
    tt = store.tt
    upper = max(store.model.max_delay_of(tt, c) for c in tt.connections)
    best = extract_decision_graph(store, s, tau_s, kappa=0)
    if best is None:
        return None
    if compact_representation(best, tt).arc_count > arc_budget:
        raise InvalidParameterError(f"ni el camino sin alternativas cabe en {arc_budget} arcos")
    lo, hi = 1, upper
    while lo <= hi:
        mid = (lo + hi) // 2
        graph = extract_decision_graph(store, s, tau_s, kappa=mid)
        if compact_representation(graph, tt).arc_count <= arc_budget:
            best = graph
            lo = mid + 1
        else:
            hi = mid - 1
    return best


def solve_alpha_bounded(
    tt: Timetable,
    s: int,
    tau_s: int,
    t: int,
    alpha: float,
    model: DelayModel,
    beta: float = 0.0,
    arc_budget: Optional[int] = None,
    contracted: Optional[ContractedTimetable] = None,
) -> Optional[MeatSolution]:
    """
    Grafo de decisión con llegada esperada mínima entre los viajes que no
    terminan después de τs + α·(esat − τs).

    `s` y `t` son paradas del horario original; si se pasa `contracted`
    se reutiliza la contracción.
    """
    if alpha < 1:
        raise InvalidParameterError(f"α debe ser ≥ 1: {alpha}")
    if arc_budget is not None and arc_budget < 1:
        raise InvalidParameterError(f"presupuesto de arcos inválido: {arc_budget}")
    tt.check_stop(s)
    tt.check_stop(t)
    if contracted is None:
        contracted = contract_footpaths(tt)
    ctt = contracted.timetable
    cs, ct = contracted.stop(s), contracted.stop(t)
    if cs == ct:
        raise InvalidParameterError("origen y destino quedan en el mismo grupo de paradas a pie")

    safe = esat(ctt, cs, tau_s, ct, model)
    if safe is None:
        logger.info("🛑 Sin viaje seguro de %s a %s", tt.stops[s].code, tt.stops[t].code)
        return None
    latest = tau_s + alpha * (safe - tau_s)
    reachable = reachable_connections(ctt, cs, tau_s, until=latest)
    store = meat_profile_scan(
        ctt, ct, model, beta, source_time=tau_s, latest_arrival=latest, reachable=reachable
    )
    if arc_budget is None:
        graph = extract_decision_graph(store, cs, tau_s)
    else:
        graph = _largest_window(store, cs, tau_s, arc_budget)
    if graph is None:
        return None
    logger.debug(
        "α=%.2f: esat %d, cota %.0f, %d conexiones escaneadas, %d tramos",
        alpha, safe, latest, store.scanned, graph.arc_count,
    )
    return MeatSolution(graph, compact_representation(graph, ctt), safe, latest, contracted, store)
