"""Conjuntos de consultas aleatorias reproducibles"""

from dataclasses import dataclass, field
from typing import Iterator, List, Tuple

import numpy as np

from app.errors import InvalidParameterError
from app.timetable.model import Timetable

DAY_SECONDS = 86400


@dataclass(frozen=True)
class Query:
    source: int
    target: int
    time: int


@dataclass
class QuerySet:
    seed: int
    queries: List[Query] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.queries)

    def __iter__(self) -> Iterator[Query]:
        return iter(self.queries)

    def as_tuples(self) -> List[Tuple[int, int, int]]:
        return [(q.source, q.target, q.time) for q in self.queries]


def generate_queries(tt: Timetable, n: int, seed: int, distinct: bool = True) -> QuerySet:
    """
    `n` consultas (s, t, τ) con paradas uniformes y τ uniforme en [0, 86400).
    Con `distinct`, s ≠ t.
    """
    if n < 0:
        raise InvalidParameterError(f"número de consultas negativo: {n}")
    if distinct and tt.num_stops < 2:
        raise InvalidParameterError("se necesitan dos paradas para consultas con s ≠ t")
    rng = np.random.default_rng(seed)
    queries = []
    for _ in range(n):
        s = int(rng.integers(tt.num_stops))
        t = int(rng.integers(tt.num_stops))
        while distinct and t == s:
            t = int(rng.integers(tt.num_stops))
        queries.append(Query(s, t, int(rng.integers(DAY_SECONDS))))
    return QuerySet(seed, queries)
