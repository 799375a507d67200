"""
Generadores de horarios sintéticos.

- grid_of_cities: ciudades densas unidas por pocos trenes; se parte bien.
- random_dag: trips cortos al azar, para contrastar con los oráculos.
- risky_transfer: instancias pequeñas con transbordos arriesgados y
  alternativas seguras para el modelo con retrasos.
"""

import logging
import math
from typing import List, Tuple

import numpy as np

from app.errors import InvalidParameterError
from app.timetable.builder import TimetableBuilder
from app.timetable.model import Timetable

logger = logging.getLogger(__name__)

GENERATOR_KINDS = ("grid", "random", "risky")


def grid_of_cities(
    cities: int = 10,
    stops_per_city: int = 30,
    seed: int = 0,
    lines_per_city: int = 3,
    line_length: int = 10,
    headway: int = 900,
    intercity_headway: int = 7200,
    start: int = 6 * 3600,
    end: int = 22 * 3600,
    walking_pairs: bool = True,
) -> Timetable:
    """
    Ciudades en una cuadrícula. Cada ciudad tiene líneas de autobús que pasan
    por su parada central; las centrales de ciudades vecinas se unen con un
    tren cada `intercity_headway` segundos.
    """
    if cities < 1 or stops_per_city < 2:
        raise InvalidParameterError("se necesita al menos una ciudad con dos paradas")
    line_length = min(line_length, stops_per_city)
    rng = np.random.default_rng(seed)
    b = TimetableBuilder()

    def code(city: int, stop: int) -> str:
        return f"c{city}s{stop}"

    for city in range(cities):
        for stop in range(stops_per_city):
            b.add_stop(code(city, stop), 120 if stop == 0 else 60)
        if walking_pairs and stops_per_city >= 3:
            b.add_footpath(code(city, 1), code(city, 2), 120)
            b.add_footpath(code(city, 2), code(city, 1), 120)

        for line in range(lines_per_city):
            others = [int(i) for i in rng.permutation(np.arange(1, stops_per_city))[: line_length - 1]]
            path = [0] + others
            # la línea 0 cubre también las paradas que ninguna otra toca
            if line == 0:
                path = [0] + list(range(1, stops_per_city))
            hops = [int(x) for x in rng.integers(120, 480, size=len(path) - 1)]
            offset = int(rng.integers(0, headway))
            for direction, stops in (("a", path), ("b", path[::-1])):
                durations = hops if direction == "a" else hops[::-1]
                departure, j = start + offset, 0
                while departure < end:
                    trip = f"c{city}l{line}{direction}{j}"
                    times, clock = [], departure
                    for dur in durations:
                        times.append((clock, clock + dur))
                        clock += dur + 30
                    b.add_run(trip, [code(city, s) for s in stops], times)
                    departure += headway
                    j += 1

    width = math.ceil(math.sqrt(cities))
    for city in range(cities):
        row, col = divmod(city, width)
        neighbours = []
        if col + 1 < width and city + 1 < cities:
            neighbours.append(city + 1)
        if city + width < cities:
            neighbours.append(city + width)
        for other in neighbours:
            travel = int(rng.integers(1200, 3600))
            for a, z in ((city, other), (other, city)):
                departure, j = start + int(rng.integers(0, intercity_headway)), 0
                while departure < end:
                    b.add_run(f"ic{a}-{z}d{j}", [code(a, 0), code(z, 0)], [(departure, departure + travel)])
                    departure += intercity_headway
                    j += 1

    tt = b.build()
    logger.debug("cuadrícula de ciudades: %r", tt)
    return tt


def random_dag(
    stops: int = 20,
    connections: int = 200,
    seed: int = 0,
    footpaths: int = 0,
    horizon: int = 86400,
) -> Timetable:
    """Trips de 1 a 5 conexiones con horas crecientes; caminatas al azar cerradas por clausura"""
    if stops < 2:
        raise InvalidParameterError("se necesitan al menos dos paradas")
    rng = np.random.default_rng(seed)
    b = TimetableBuilder()
    for i in range(stops):
        b.add_stop(f"r{i}", int(rng.integers(0, 300)))

    made, trip = 0, 0
    while made < connections:
        length = min(int(rng.integers(1, 6)), connections - made)
        here = int(rng.integers(stops))
        clock = int(rng.integers(0, horizon - 3600 * 3))
        path: List[int] = [here]
        times: List[Tuple[int, int]] = []
        for _ in range(length):
            there = int(rng.integers(stops - 1))
            if there >= here:
                there += 1
            dur = int(rng.integers(60, 1800))
            times.append((clock, clock + dur))
            clock += dur + int(rng.integers(1, 120))
            path.append(there)
            here = there
        b.add_run(f"t{trip}", [f"r{i}" for i in path], times)
        made += length
        trip += 1

    for _ in range(footpaths):
        a, z = (int(x) for x in rng.choice(stops, size=2, replace=False))
        dur = int(rng.integers(60, 900))
        b.add_footpath(f"r{a}", f"r{z}", dur)
        b.add_footpath(f"r{z}", f"r{a}", dur)

    return b.build(synthesize_closure=footpaths > 0)


RISKY_VARIANTS = ("simple", "backup-chain", "late-backup")


def risky_transfer(variant: str = "backup-chain") -> Timetable:
    """
    Instancias fijas, todas con tiempo de cambio 60 s. Con retraso máximo
    d = 1200 (max_D = 1260):

    simple        s→a y en a un transbordo arriesgado con una alternativa segura.
    backup-chain  dos paradas de transbordo (a, b); en b hay alternativa y
                  alternativa de la alternativa.
    late-backup   (pensada para d = 600) un tren directo seguro y una ruta
                  arriesgada cuya alternativa llega después de esat.
    """
    if variant not in RISKY_VARIANTS:
        raise InvalidParameterError(f"variante desconocida: {variant}")
    b = TimetableBuilder()
    for stop in ("s", "a", "b", "t"):
        b.add_stop(stop, 60)

    if variant == "simple":
        b.add_run("P1", ["s", "a"], [(0, 600)])
        b.add_run("RISKY", ["a", "t"], [(900, 1500)])
        b.add_run("BACKUP", ["a", "t"], [(2400, 3000)])
    elif variant == "backup-chain":
        b.add_run("P1", ["s", "a"], [(0, 600)])
        b.add_run("P2", ["a", "b"], [(800, 1400)])
        b.add_run("B2", ["a", "b"], [(2000, 2600)])
        b.add_run("P3", ["b", "t"], [(1600, 2200)])
        b.add_run("B3", ["b", "t"], [(2800, 3400)])
        b.add_run("BB3", ["b", "t"], [(4000, 4600)])
    else:
        b.add_run("DIRECT", ["s", "t"], [(0, 1200)])
        b.add_run("P1", ["s", "a"], [(0, 300)])
        b.add_run("RISKY", ["a", "t"], [(400, 700)])
        b.add_run("BACKUP", ["a", "t"], [(1000, 1300)])
    return b.build()
