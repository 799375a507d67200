"""Vectores de Pareto: A[ℓ] es la llegada más temprana con a lo sumo ℓ tramos"""

import numpy as np

from app.errors import InvalidParameterError
from app.profile.packed import MAX_LEGS
from app.timetable.model import INFINITY

VECTOR_DTYPE = np.int64


def check_leg_max(leg_max: int) -> int:
    if not 1 <= leg_max <= MAX_LEGS:
        raise InvalidParameterError(f"leg_max debe estar en [1, {MAX_LEGS}]: {leg_max}")
    return leg_max


def infinite_vector(leg_max: int) -> np.ndarray:
    return np.full(leg_max, INFINITY, dtype=VECTOR_DTYPE)


def broadcast(value: int, leg_max: int) -> np.ndarray:
    return np.full(leg_max, value, dtype=VECTOR_DTYPE)


def vector_shift(a: np.ndarray, modified: bool = False) -> np.ndarray:
    """B[1] = ∞, B[i] = A[i−1]; la variante modificada hace B[L] = min(A[L−1], A[L])"""
    b = np.empty_like(a)
    b[0] = INFINITY
    b[1:] = a[:-1]
    if modified and len(a) > 1:
        b[-1] = min(a[-2], a[-1])
    return b


def is_infinite_vector(a: np.ndarray) -> bool:
    return bool(np.all(a >= INFINITY))


def as_tuple(a: np.ndarray) -> tuple:
    """Vector como tupla de enteros, con None para ∞"""
    return tuple(None if v >= INFINITY else int(v) for v in a)
