import pytest
from fastapi.testclient import TestClient
from sqlalchemy import create_engine
from sqlalchemy.orm import sessionmaker

from app.database.database import Base, get_db
from app.harness.generators import grid_of_cities, random_dag
from app.timetable.loader import load_timetable


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: comprobaciones a escala completa; se omiten con -m \"not slow\"")


# Cuatro viajes de s a t: 5→14 (1 tramo), 7→12 (2), 6→13 (2) y 6→11 (3).
# Todos los trips tienen una sola conexión y los tiempos de cambio son 0.
HOPS_TEXT = """\
# paradas
S s 0
S x 0
S y 0
S z 0
S t 0
T direct
T sx
T sz
T xy
T zt
T xt
T yt
C direct s t 5 14
C sx s x 6 7
C sz s z 7 8
C xy x y 8 9
C zt z t 9 12
C xt x t 9 13
C yt y t 10 11
"""


@pytest.fixture
def hops():
    return load_timetable(HOPS_TEXT)


@pytest.fixture
def hops_text():
    return HOPS_TEXT


@pytest.fixture
def hops_file(tmp_path):
    path = tmp_path / "hops.txt"
    path.write_text(HOPS_TEXT, encoding="utf-8")
    return str(path)


# A→B→D→E→B→C llega a C a la misma hora que A→B→C pero pasa dos veces por B.
LOOP_TRAP_TEXT = """\
S A 0
S B 0
S C 0
S D 0
S E 0
T ab
T bd
T de
T eb
T bc
C ab A B 0 10
C bd B D 11 12
C de D E 13 14
C eb E B 15 16
C bc B C 20 30
"""


@pytest.fixture
def loop_trap():
    return load_timetable(LOOP_TRAP_TEXT)


@pytest.fixture(scope="session")
def small_grid():
    return grid_of_cities(
        cities=4,
        stops_per_city=8,
        seed=3,
        lines_per_city=2,
        line_length=5,
        headway=1800,
        intercity_headway=3600,
        start=6 * 3600,
        end=12 * 3600,
    )


@pytest.fixture(scope="session")
def random_timetables():
    """Diez horarios aleatorios sin caminatas entre paradas"""
    return [random_dag(stops=12, connections=120, seed=seed) for seed in range(10)]


@pytest.fixture(scope="session")
def walking_timetables():
    return [random_dag(stops=12, connections=120, seed=100 + seed, footpaths=4) for seed in range(5)]


@pytest.fixture
def client(tmp_path):
    from main import app

    engine = create_engine(f"sqlite:///{tmp_path / 'test.db'}", connect_args={"check_same_thread": False})
    TestingSession = sessionmaker(autocommit=False, autoflush=False, bind=engine)
    from app.models import models  # noqa: F401

    Base.metadata.create_all(bind=engine)

    def override_get_db():
        db = TestingSession()
        try:
            yield db
        finally:
            db.close()

    app.dependency_overrides[get_db] = override_get_db
    with TestClient(app) as c:
        yield c
    app.dependency_overrides.clear()
    engine.dispose()
