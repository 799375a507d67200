import pytest

from app.harness.generators import risky_transfer
from app.meat.delay import delay_cdf, expected_delay
from app.timetable.loader import dump_timetable


@pytest.fixture
def hops_id(client, hops_text):
    response = client.post("/api/timetables", json={"name": "hops", "content": hops_text})
    assert response.status_code == 201, response.text
    return response.json()["id"]


def test_root_and_health(client):
    assert client.get("/").json() == {"message": "connscan"}
    assert client.get("/health").json()["status"] == "ok"


# ==================== HORARIOS ====================

def test_upload_and_read_timetable(client, hops_id):
    data = client.get(f"/api/timetables/{hops_id}").json()
    assert data["name"] == "hops"
    assert data["num_stops"] == 5
    assert data["num_connections"] == 7
    assert data["num_trips"] == 7
    assert len(data["content_hash"]) == 64

    listed = client.get("/api/timetables").json()
    assert [t["id"] for t in listed] == [hops_id]


def test_missing_timetable(client):
    response = client.get("/api/timetables/999")
    assert response.status_code == 404
    assert response.json()["detail"] == "Horario no encontrado"
    assert client.post("/api/timetables/999/ea", json={"source": "s", "time": 0, "target": "t"}).status_code == 404


def test_validation_endpoint(client, hops_id):
    data = client.get(f"/api/timetables/{hops_id}/validation").json()
    assert data == {"ok": True, "violations": []}


def test_invalid_timetables_are_rejected(client):
    response = client.post(
        "/api/timetables", json={"name": "roto", "content": "S a 0\nS b 0\nT r\nC r a b 10 10\n"}
    )
    assert response.status_code == 400
    detail = response.json()["detail"]
    assert detail["violations"]

    response = client.post("/api/timetables", json={"name": "roto", "content": "S a 0\nS b cero\n"})
    assert response.status_code == 400
    assert "línea 2" in response.json()["detail"]

    assert client.post("/api/timetables", json={"name": "vacío", "content": "  "}).status_code == 422


# ==================== CONSULTAS ====================

def test_earliest_arrival_query(client, hops_id):
    response = client.post(
        f"/api/timetables/{hops_id}/ea", json={"source": "s", "time": "00:00:05", "target": "t"}
    )
    assert response.status_code == 200, response.text
    data = response.json()
    assert data["arrival"] == 11
    assert data["journey"]["dep_time"] == 6
    assert [leg["trip"] for leg in data["journey"]["legs"]] == ["sx", "xy", "yt"]


def test_earliest_arrival_without_journey(client, hops_id):
    data = client.post(f"/api/timetables/{hops_id}/ea", json={"source": "s", "time": 11, "target": "t"}).json()
    assert data["arrival"] is None
    assert data["journey"] is None


def test_query_errors(client, hops_id):
    response = client.post(f"/api/timetables/{hops_id}/ea", json={"source": "nowhere", "time": 0, "target": "t"})
    assert response.status_code == 404
    response = client.post(f"/api/timetables/{hops_id}/ea", json={"source": "s", "time": "8h", "target": "t"})
    assert response.status_code == 422
    response = client.post(f"/api/timetables/{hops_id}/profile", json={"source": "s", "target": "t", "leg_max": 40})
    assert response.status_code == 400


def test_profile_queries(client, hops_id):
    scalar = client.post(f"/api/timetables/{hops_id}/profile", json={"source": "s", "target": "t"}).json()
    assert [(e["dep_time"], e["arr_time"]) for e in scalar["entries"]] == [(6, 11), (7, 12)]

    pareto = client.post(
        f"/api/timetables/{hops_id}/profile", json={"source": "s", "target": "t", "leg_max": 3}
    ).json()
    assert [(e["dep_time"], e["arr_time"], e["legs"]) for e in pareto["entries"]] == [
        (5, 14, 1),
        (6, 11, 3),
        (7, 12, 2),
    ]


def test_range_query(client, hops_id):
    data = client.post(
        f"/api/timetables/{hops_id}/range", json={"source": "s", "target": "t", "time": 5}
    ).json()
    assert data["earliest_arrival"] == 11
    assert data["horizon"] == 17
    assert [(e["dep_time"], e["arr_time"]) for e in data["entries"]] == [(6, 11), (7, 12)]


def test_meat_query(client):
    content = dump_timetable(risky_transfer("simple"))
    tid = client.post("/api/timetables", json={"name": "riesgo", "content": content}).json()["id"]
    body = {"source": "s", "time": 0, "target": "t", "alpha": 2, "max_delay": 1200, "emit": "text"}
    data = client.post(f"/api/timetables/{tid}/meat", json=body).json()
    assert data["reachable"]
    assert data["esat"] == 3000
    assert data["complete"]
    assert sorted(leg["trip"] for leg in data["legs"]) == ["BACKUP", "P1", "RISKY"]
    p = delay_cdf(60, 1200, 300)
    e = expected_delay(60, 1200)
    assert data["expected_arrival"] == pytest.approx(p * (1500 + e) + (1 - p) * (3000 + e))
    assert data["rendering"].startswith("s 00:00:00 -> t")

    unreachable = client.post(f"/api/timetables/{tid}/meat", json={**body, "source": "t", "target": "s"}).json()
    assert unreachable["reachable"] is False
    assert unreachable["legs"] == []

    assert client.post(f"/api/timetables/{tid}/meat", json={**body, "alpha": 0.5}).status_code == 422
    assert client.post(f"/api/timetables/{tid}/meat", json={**body, "emit": "svg"}).status_code == 422


# ==================== BENCHMARK ====================

def test_benchmark_runs(client, hops_id):
    config = "name: api\nqueries: 4\nalgorithms: [ea, ea-nostop, profile]\n"
    response = client.post("/api/bench", json={"timetable_id": hops_id, "config": config})
    assert response.status_code == 201, response.text
    run = response.json()
    assert run["status"] == "PASSED"
    assert run["name"] == "api"
    assert {s["algorithm"] for s in run["summaries"]} == {"ea", "ea-nostop", "profile"}

    assert [r["id"] for r in client.get("/api/bench").json()] == [run["id"]]
    detail = client.get(f"/api/bench/{run['id']}").json()
    assert len(detail["records"]) == 12
    assert client.get("/api/bench/999").status_code == 404


def test_benchmark_bad_config(client, hops_id):
    response = client.post("/api/bench", json={"timetable_id": hops_id, "config": "algorithms: [magic]"})
    assert response.status_code == 400
