"""
Consultas sobre un horario guardado:
- Llegada más temprana con su viaje
- Perfiles escalares y de Pareto
- Consultas por rango
- Grafos de decisión con retrasos
"""

from fastapi import APIRouter, Depends
from sqlalchemy.orm import Session

from app.database.database import get_db
from app.ea.journey import Journey, Leg
from app.ea.scan import reconstruct_journey, scan_earliest_arrival
from app.errors import ConnScanError
from app.meat.delay import DelayModel
from app.meat.graph import to_dot, to_text
from app.meat.solver import solve_alpha_bounded
from app.profile.scan import (
    ProfileOptions,
    ea_profile,
    filter_range,
    pareto_profile,
    pareto_tuples,
    range_query,
)
from app.routers.timetables import get_document, http_error, parsed_timetable
from app.schemas.timetable import (
    EaRequest,
    EaResponse,
    JourneyResponse,
    LegResponse,
    MeatRequest,
    MeatResponse,
    ProfileEntryResponse,
    ProfileRequest,
    ProfileResponse,
    RangeRequest,
)
from app.timetable.model import INFINITY, Timetable

router = APIRouter(prefix="/api/timetables", tags=["Queries"])


def _leg(tt: Timetable, leg: Leg) -> LegResponse:
    enter, exit_ = tt.connections[leg.enter], tt.connections[leg.exit]
    return LegResponse(
        trip=tt.trips[enter.trip].code,
        enter_stop=tt.stops[enter.dep_stop].code,
        dep_time=enter.dep_time,
        exit_stop=tt.stops[exit_.arr_stop].code,
        arr_time=exit_.arr_time,
    )


def _journey(tt: Timetable, journey: Journey) -> JourneyResponse:
    return JourneyResponse(
        dep_time=journey.dep_time,
        arr_time=journey.arr_time,
        legs=[_leg(tt, leg) for leg in journey.legs],
    )


def _entries(store, pairs) -> list:
    if store.is_pareto:
        return [
            ProfileEntryResponse(dep_time=dep, arr_time=arr, legs=legs)
            for dep, arr, legs in sorted(pareto_tuples(pairs))
        ]
    result = []
    for dep, value in pairs:
        arr = store.encoding.arrival(value)
        if arr < INFINITY:
            result.append(ProfileEntryResponse(dep_time=int(dep), arr_time=int(arr)))
    return result


@router.post("/{timetable_id}/ea", response_model=EaResponse)
def earliest_arrival_query(timetable_id: int, query: EaRequest, db: Session = Depends(get_db)):
    """Llegada más temprana a `target` saliendo de `source` no antes de `time`"""
    tt = parsed_timetable(get_document(timetable_id, db))
    try:
        s, t = tt.stop_id(query.source), tt.stop_id(query.target)
        result = scan_earliest_arrival(tt, s, query.time, t, pointers=True)
        if result.arrival is None:
            return EaResponse(arrival=None, scanned=result.scanned)
        journey = reconstruct_journey(tt, result.state, s, query.time, t)
    except ConnScanError as e:
        raise http_error(e) from e
    return EaResponse(arrival=result.arrival, scanned=result.scanned, journey=_journey(tt, journey))


@router.post("/{timetable_id}/profile", response_model=ProfileResponse)
def profile_query(timetable_id: int, query: ProfileRequest, db: Session = Depends(get_db)):
    """Perfil completo del origen; con `leg_max` es de Pareto"""
    tt = parsed_timetable(get_document(timetable_id, db))
    try:
        s, t = tt.stop_id(query.source), tt.stop_id(query.target)
        opts = ProfileOptions(source=s)
        if query.leg_max is None:
            store = ea_profile(tt, t, opts)
        else:
            store = pareto_profile(tt, t, query.leg_max, opts)
    except ConnScanError as e:
        raise http_error(e) from e
    return ProfileResponse(entries=_entries(store, store.pairs(s)), scanned=store.scanned)


@router.post("/{timetable_id}/range", response_model=ProfileResponse)
def range_profile_query(timetable_id: int, query: RangeRequest, db: Session = Depends(get_db)):
    tt = parsed_timetable(get_document(timetable_id, db))
    try:
        s, t = tt.stop_id(query.source), tt.stop_id(query.target)
        result = range_query(tt, s, query.time, t, query.leg_max)
    except ConnScanError as e:
        raise http_error(e) from e
    if not result.reachable:
        return ProfileResponse(entries=[], scanned=result.scanned)
    pairs = filter_range(result.store.pairs(s), query.time, result.horizon)
    return ProfileResponse(
        entries=_entries(result.store, pairs),
        scanned=result.scanned,
        earliest_arrival=result.earliest_arrival,
        horizon=result.horizon,
    )


@router.post("/{timetable_id}/meat", response_model=MeatResponse)
def meat_query(timetable_id: int, query: MeatRequest, db: Session = Depends(get_db)):
    """Grafo de decisión con llegada esperada mínima acotada por α"""
    tt = parsed_timetable(get_document(timetable_id, db))
    try:
        s, t = tt.stop_id(query.source), tt.stop_id(query.target)
        solution = solve_alpha_bounded(
            tt, s, query.time, t, query.alpha, DelayModel(query.max_delay), query.beta, query.arc_budget
        )
    except ConnScanError as e:
        raise http_error(e) from e
    if solution is None:
        return MeatResponse(reachable=False)

    ctt = solution.timetable
    rendering = None
    if query.emit == "dot":
        rendering = to_dot(solution.graph, ctt, compact=query.compact)
    elif query.emit == "text":
        rendering = to_text(solution.graph, ctt, compact=query.compact)
    return MeatResponse(
        reachable=True,
        esat=solution.esat,
        latest_arrival=solution.latest_arrival,
        expected_arrival=solution.expected_arrival,
        complete=solution.graph.complete,
        legs=[_leg(ctt, leg) for leg in solution.graph.legs],
        compact_arcs=solution.compact.arc_count,
        rendering=rendering,
    )
