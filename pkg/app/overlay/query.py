"""
Consultas aceleradas: el escaneo base restringido a las conexiones de larga
distancia de las celdas del origen y del destino.
"""

import logging
from dataclasses import replace
from typing import Iterator, List, Optional

from app.config import DEFAULT_LEG_MAX
from app.ea.scan import EaOptions, EaScanResult, scan_earliest_arrival
from app.errors import InvalidParameterError
from app.overlay.customize import OverlayIndex
from app.overlay.merge import assemble_connection_subset
from app.profile.scan import ProfileOptions, RangeResult, ea_profile, pareto_profile, range_query
from app.profile.store import ProfileStore
from app.timetable.model import Timetable

logger = logging.getLogger(__name__)

QUERY_KINDS = ("ea", "ea-profile", "pareto-profile", "range")


def _recording(stream: Iterator[int], sink: List[int]) -> Iterator[int]:
    for cid in stream:
        sink.append(cid)
        yield cid


def accel_earliest_arrival(
    overlay: OverlayIndex, tt: Timetable, s: int, tau: int, t: int, opts: EaOptions = EaOptions()
) -> EaScanResult:
    stream = assemble_connection_subset(overlay, tt, s, t, from_time=tau)
    return scan_earliest_arrival(tt, s, tau, t, opts, connections=stream)


def accel_range(
    overlay: OverlayIndex,
    tt: Timetable,
    s: int,
    tau_s: int,
    t: int,
    leg_max: Optional[int] = None,
    opts: ProfileOptions = ProfileOptions(),
) -> RangeResult:
    """Fusiona de forma incremental hasta pasar τt y escanea la secuencia temporal"""
    stream = assemble_connection_subset(overlay, tt, s, t, from_time=tau_s)
    consumed: List[int] = []
    first = scan_earliest_arrival(tt, s, tau_s, t, connections=_recording(stream, consumed))
    if first.arrival is None:
        return RangeResult(None, None, None, first.scanned)
    horizon = tau_s + 2 * (first.arrival - tau_s)
    if not consumed or tt.connections[consumed[-1]].dep_time <= horizon:
        for cid in stream:
            consumed.append(cid)
            if tt.connections[cid].dep_time > horizon:
                break
    return range_query(tt, s, tau_s, t, leg_max, opts, connections=consumed)


def accel_query(
    overlay: OverlayIndex,
    tt: Timetable,
    s: int,
    tau_s: Optional[int],
    t: int,
    kind: str = "ea",
    leg_max: Optional[int] = None,
    opts: Optional[ProfileOptions] = None,
):
    """
    Misma respuesta que la consulta base del tipo indicado:
    EaScanResult, ProfileStore o RangeResult. En `range`, `leg_max` None da
    el perfil escalar.
    """
    if kind not in QUERY_KINDS:
        raise InvalidParameterError(f"tipo de consulta desconocido: {kind}")
    overlay.check(tt)
    if kind == "ea":
        if tau_s is None:
            raise InvalidParameterError("la consulta ea necesita una hora de salida")
        return accel_earliest_arrival(overlay, tt, s, tau_s, t)
    opts = opts or ProfileOptions()
    if kind == "range":
        if tau_s is None:
            raise InvalidParameterError("la consulta por rango necesita una hora de salida")
        return accel_range(overlay, tt, s, tau_s, t, leg_max, opts)

    subset = assemble_connection_subset(overlay, tt, s, t)
    opts = replace(opts, source=s)
    store: ProfileStore
    if kind == "ea-profile":
        store = ea_profile(tt, t, opts, connections=subset)
    else:
        store = pareto_profile(tt, t, leg_max or DEFAULT_LEG_MAX, opts, connections=subset)
    logger.debug("perfil acelerado %s: %d de %d conexiones", kind, len(subset), tt.num_connections)
    return store
