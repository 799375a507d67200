"""
Errores del motor de rutas.

Los casos "sin camino" o "sin grafo de decisión" se devuelven como None,
nunca como excepción.
"""

from typing import Any, List, Optional


class ConnScanError(Exception):
    """Error base del motor"""


class TimetableParseError(ConnScanError):
    def __init__(self, line_no: int, message: str, line: Optional[str] = None):
        self.line_no = line_no
        self.line = line
        super().__init__(f"línea {line_no}: {message}")


class TimetableConstraintError(ConnScanError):
    """El horario no cumple los invariantes; `report` contiene las violaciones"""

    def __init__(self, report: Any):
        self.report = report
        violations: List[Any] = list(getattr(report, "violations", []))
        first = violations[0] if violations else None
        summary = f"{len(violations)} violaciones"
        if first is not None:
            summary += f" (primera: {first})"
        super().__init__(summary)


class InvalidStopError(ConnScanError):
    def __init__(self, stop: Any):
        self.stop = stop
        super().__init__(f"parada desconocida: {stop!r}")


class InvalidParameterError(ConnScanError):
    pass


class InternalConsistencyError(ConnScanError):
    """Un perfil promete un viaje que la extracción no encuentra"""


class InvalidDecisionGraphError(ConnScanError):
    pass


class PartitionInfeasibleError(ConnScanError):
    pass


class OracleRefusedError(ConnScanError):
    pass


class PolicyStrandedError(ConnScanError):
    """La simulación quedó sin continuación: el grafo no es seguro"""


class IndexMismatchError(ConnScanError):
    pass
