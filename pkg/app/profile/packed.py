"""
Marcas de tiempo empaquetadas.

Distribución de bits (32 bits para llegadas de hasta 2^27 − 1 s):

    | bits altos de la llegada | 5 bits de tramos | r bits bajos de la llegada |

El orden entero de los valores empaquetados coincide con el orden
lexicográfico de (llegada redondeada, tramos, llegada exacta). Con r = 0
equivale a multiplicar los tiempos por 2^5 y sumar 1 por cada tramo.
"""

from dataclasses import dataclass
from typing import Tuple

from app.errors import InvalidParameterError
from app.timetable.model import INFINITY, is_infinite

LEG_BITS = 5
MAX_LEGS = (1 << LEG_BITS) - 1
ARRIVAL_BITS = 27


def pack(arrival: int, legs: int, rounding_bits: int = 0) -> int:
    if not 0 <= legs <= MAX_LEGS:
        raise InvalidParameterError(f"tramos fuera de rango: {legs}")
    low_mask = (1 << rounding_bits) - 1
    high = arrival >> rounding_bits
    return (high << (rounding_bits + LEG_BITS)) | (legs << rounding_bits) | (arrival & low_mask)


def unpack(value: int, rounding_bits: int = 0) -> Tuple[int, int]:
    low_mask = (1 << rounding_bits) - 1
    legs = (value >> rounding_bits) & MAX_LEGS
    high = value >> (rounding_bits + LEG_BITS)
    return (high << rounding_bits) | (value & low_mask), legs


@dataclass(frozen=True)
class TimeEncoding:
    """Cómo guarda un perfil escalar sus llegadas"""

    leg_tiebreak: bool = False
    rounding_bits: int = 0

    def __post_init__(self):
        if not 0 <= self.rounding_bits <= ARRIVAL_BITS:
            raise InvalidParameterError(f"bits de redondeo fuera de rango: {self.rounding_bits}")

    @property
    def leg_increment(self) -> int:
        return (1 << self.rounding_bits) if self.leg_tiebreak else 0

    def encode(self, arrival: int, legs: int = 1) -> int:
        if is_infinite(arrival):
            return INFINITY
        if not self.leg_tiebreak:
            return arrival
        return pack(arrival, legs, self.rounding_bits)

    def add_leg(self, value: int) -> int:
        if is_infinite(value) or not self.leg_tiebreak:
            return value
        if (value >> self.rounding_bits) & MAX_LEGS == MAX_LEGS:
            raise InvalidParameterError("más de 31 tramos no caben en la marca empaquetada")
        return value + self.leg_increment

    def arrival(self, value: int) -> int:
        if is_infinite(value) or not self.leg_tiebreak:
            return value
        return unpack(value, self.rounding_bits)[0]

    def legs(self, value: int) -> int:
        if is_infinite(value) or not self.leg_tiebreak:
            return 0
        return unpack(value, self.rounding_bits)[1]
