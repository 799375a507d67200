"""
Simulación Monte Carlo de un grafo de decisión.

El viajero sigue una política voraz: al bajar en una parada con retraso D
toma el primer tramo del grafo que sale de ahí con dep − arr ≥ D.
"""

import logging
import math
from bisect import bisect_left
from dataclasses import dataclass

import numpy as np

from app.config import MC_SAMPLES
from app.errors import InvalidParameterError, PolicyStrandedError
from app.meat.delay import DelayModel
from app.meat.graph import DecisionGraph
from app.timetable.model import Timetable

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class MonteCarloResult:
    mean: float
    stderr: float
    samples: int

    def within(self, expected: float, sigmas: float = 3.0) -> bool:
        return abs(self.mean - expected) <= sigmas * self.stderr + 1e-9


def monte_carlo_eat(
    tt: Timetable,
    graph: DecisionGraph,
    model: DelayModel,
    samples: int = MC_SAMPLES,
    seed: int = 0,
) -> MonteCarloResult:
    """
    Media y error estándar de la llegada simulada. `tt` es el horario sobre
    el que se extrajo el grafo (el contraído, si hubo contracción).
    """
    if samples < 2:
        raise InvalidParameterError(f"se necesitan al menos 2 muestras: {samples}")
    if not graph.legs:
        raise InvalidParameterError("grafo sin tramos")
    conns = tt.connections
    departures = graph.departures(tt)
    dep_times = {stop: [conns[leg.enter].dep_time for leg in legs] for stop, legs in departures.items()}
    first = graph.first_leg(tt)
    rng = np.random.default_rng(seed)

    arrivals = np.empty(samples, dtype=float)
    for i in range(samples):
        leg = first
        while True:
            e = conns[leg.exit]
            delay = model.sample(tt, e, float(rng.random()))
            if e.arr_stop == graph.target:
                arrivals[i] = e.arr_time + delay
                break
            times = dep_times.get(e.arr_stop, [])
            j = bisect_left(times, e.arr_time + delay)
            if j == len(times):
                raise PolicyStrandedError(
                    f"retraso {delay:.0f} s tras {tt.describe_connection(e.id)}: ningún tramo alcanzable"
                )
            leg = departures[e.arr_stop][j]

    mean = float(arrivals.mean())
    stderr = float(arrivals.std(ddof=1)) / math.sqrt(samples)
    logger.debug("Monte Carlo %d muestras: %.2f ± %.2f", samples, mean, stderr)
    return MonteCarloResult(mean, stderr, samples)
