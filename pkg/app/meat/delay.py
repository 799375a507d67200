"""
Modelo de retrasos.

La llegada de una conexión c a su parada se retrasa D_c, con D_c ≤ m + d, donde
m es el tiempo de cambio de la parada de llegada y d el retraso máximo global.
El tiempo de cambio va incluido en la distribución: un transbordo a una
conexión que sale x segundos después de la llegada programada sale bien con
probabilidad P[D_c ≤ x].

    f(x) = 0                          x < 0
    f(x) = 2x / (6m − 3x)             0 ≤ x ≤ m
    f(x) = (31u + 2d) / (30u + 3d)    u = x − m, m < x < m + d
    f(x) = 1                          x ≥ m + d

Con m = 0 el primer tramo desaparece y f(0) = 2/3.
"""

import math
from dataclasses import dataclass
from functools import lru_cache

from scipy import integrate

from app.config import DEFAULT_MAX_DELAY
from app.errors import InvalidParameterError
from app.timetable.model import Connection, Timetable


def _check(m: float, d: float) -> None:
    if m < 0:
        raise InvalidParameterError(f"tiempo de cambio negativo: {m}")
    if d <= 0:
        raise InvalidParameterError(f"el retraso máximo debe ser positivo: {d}")


def delay_cdf(m: float, d: float, x: float) -> float:
    """P[D ≤ x] para la familia f_{m,d}"""
    _check(m, d)
    if x < 0:
        return 0.0
    if x >= m + d:
        return 1.0
    if m > 0 and x <= m:
        return 2 * x / (6 * m - 3 * x)
    u = x - m
    return (31 * u + 2 * d) / (30 * u + 3 * d)


def delay_quantile(m: float, d: float, y: float) -> float:
    """Inversa de la CDF; se usa para muestrear retrasos"""
    _check(m, d)
    if not 0.0 <= y <= 1.0:
        raise InvalidParameterError(f"probabilidad fuera de [0, 1]: {y}")
    if y <= 2 / 3:
        return 6 * m * y / (2 + 3 * y)
    return m + d * (3 * y - 2) / (31 - 30 * y)


@lru_cache(maxsize=4096)
def expected_delay(m: float, d: float) -> float:
    """E[D] = ∫ (1 − f) integrado a mano sobre los dos tramos"""
    _check(m, d)
    first = (5 / 3 - 4 / 3 * math.log(2)) * m
    second = d * (33 * math.log(11) - 30) / 900
    return first + second


def expected_delay_numeric(m: float, d: float) -> float:
    """E[D] por cuadratura adaptativa, para contrastar la forma cerrada"""
    _check(m, d)
    points = [m] if m > 0 else None
    value, _ = integrate.quad(
        lambda x: 1.0 - delay_cdf(m, d, x), 0.0, m + d, points=points, epsrel=1e-9, limit=200
    )
    return value


@dataclass(frozen=True)
class DelayModel:
    """Retraso máximo global `max_delay`; el resto sale del horario"""

    max_delay: int = DEFAULT_MAX_DELAY

    def __post_init__(self):
        if self.max_delay <= 0:
            raise InvalidParameterError(f"el retraso máximo debe ser positivo: {self.max_delay}")

    def min_delay(self, tt: Timetable, c: Connection) -> int:
        return tt.change_time(c.arr_stop)

    def max_delay_of(self, tt: Timetable, c: Connection) -> int:
        """max_D(c) = tiempo de cambio de la llegada + d"""
        return tt.change_time(c.arr_stop) + self.max_delay

    def transfer_probability(self, tt: Timetable, c: Connection, slack: float) -> float:
        return delay_cdf(tt.change_time(c.arr_stop), self.max_delay, slack)

    def expected(self, tt: Timetable, c: Connection) -> float:
        return expected_delay(tt.change_time(c.arr_stop), self.max_delay)

    def sample(self, tt: Timetable, c: Connection, u: float) -> float:
        return delay_quantile(tt.change_time(c.arr_stop), self.max_delay, u)
