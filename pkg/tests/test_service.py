import json
import threading

import pytest
from fastapi.testclient import TestClient

from kbdbg.service import create_app

from conftest import KB_B_TEXT, KB_C_TEXT


@pytest.fixture
def client(tmp_path):
    app = create_app(data_dir=tmp_path / "sessions")
    with TestClient(app) as c:
        yield c


def create_kb_c(client, **overrides):
    payload = {"kb_text": KB_C_TEXT, "strategy": "entropy"}
    payload.update(overrides)
    return client.post("/api/sessions", json=payload)


def test_create_session_returns_state(client):
    response = create_kb_c(client)
    assert response.status_code == 201
    state = response.json()
    assert state["status"] == "AWAITING_ANSWER"
    assert len(state["diagnoses"]) == 2
    assert abs(sum(x["probability"] for x in state["diagnoses"]) - 1.0) <= 1e-6
    assert state["current_query"]["sentences"]
    assert state["history"] == []
    assert state["kb_text"] == KB_C_TEXT


def test_malformed_formula_maps_to_400_with_position(client):
    response = client.post("/api/sessions", json={
        "kb_text": "[ontology]\na1: A ->\n", "strategy": "entropy"})
    assert response.status_code == 400
    detail = response.json()["detail"]
    assert detail["line"] == 2
    assert detail["column"] >= 5


def test_invalid_sigma_maps_to_422(client):
    response = create_kb_c(client, sigma=1.5)
    assert response.status_code == 422


def test_unknown_strategy_maps_to_422(client):
    response = create_kb_c(client, strategy="oracle")
    assert response.status_code == 422


def test_infeasible_kb_maps_to_400(client):
    response = client.post("/api/sessions", json={
        "kb_text": "[ontology]\na1: A\n[background]\nb1: B\nb2: ~B\n",
        "strategy": "entropy"})
    assert response.status_code == 400


def test_get_state_roundtrip(client):
    sid = create_kb_c(client).json()["id"]
    state = client.get(f"/api/sessions/{sid}").json()
    assert state["id"] == sid
    assert state["history"] == []
    assert state["current_query"] is not None


def test_get_unknown_id_404(client):
    assert client.get("/api/sessions/deadbeef").status_code == 404


def test_answer_flow_finishes(client):
    sid = create_kb_c(client).json()["id"]
    response = client.post(f"/api/sessions/{sid}/answer", json={"answer": "yes"})
    assert response.status_code == 200
    state = response.json()
    assert state["status"] == "FINISHED"
    assert state["diagnoses"][0]["axiom_ids"] == ["a1"]
    assert state["diagnoses"][0]["probability"] == pytest.approx(1.0)
    assert state["current_query"] is None
    assert state["history"] == [{"sentences": ["~B"], "answer": "yes"}]


def test_second_answer_conflicts(client):
    sid = create_kb_c(client).json()["id"]
    client.post(f"/api/sessions/{sid}/answer", json={"answer": "yes"})
    again = client.post(f"/api/sessions/{sid}/answer", json={"answer": "no"})
    assert again.status_code == 409


def test_bad_answer_payload_400(client):
    sid = create_kb_c(client).json()["id"]
    assert client.post(f"/api/sessions/{sid}/answer",
                       json={"answer": "maybe"}).status_code == 400
    assert client.post(f"/api/sessions/{sid}/answer",
                       json={"respond": "yes"}).status_code == 400
    assert client.post(f"/api/sessions/{sid}/answer",
                       content=b"not json").status_code == 400


def test_answer_unknown_id_404(client):
    assert client.post("/api/sessions/none/answer",
                       json={"answer": "yes"}).status_code == 404


def test_list_sessions(client):
    ids = {create_kb_c(client).json()["id"] for _ in range(3)}
    listed = client.get("/api/sessions").json()["sessions"]
    assert {s["id"] for s in listed} >= ids


def test_delete_session(client):
    sid = create_kb_c(client).json()["id"]
    assert client.delete(f"/api/sessions/{sid}").status_code == 204
    assert client.get(f"/api/sessions/{sid}").status_code == 404
    assert client.delete(f"/api/sessions/{sid}").status_code == 404


def test_persistence_restores_state(tmp_path):
    data_dir = tmp_path / "store"
    app = create_app(data_dir=data_dir)
    with TestClient(app) as client:
        sid = client.post("/api/sessions", json={
            "kb_text": KB_B_TEXT, "strategy": "entropy", "sigma": 1.0}).json()["id"]
        client.post(f"/api/sessions/{sid}/answer", json={"answer": "yes"})
        before = client.get(f"/api/sessions/{sid}").json()

    restarted = create_app(data_dir=data_dir)
    with TestClient(restarted) as client:
        after = client.get(f"/api/sessions/{sid}").json()
    assert after == before


def test_replay_reproduces_probabilities(tmp_path):
    data_dir = tmp_path / "store"
    app = create_app(data_dir=data_dir)
    with TestClient(app) as client:
        sid = client.post("/api/sessions", json={
            "kb_text": KB_B_TEXT, "strategy": "split", "sigma": 1.0}).json()["id"]
        client.post(f"/api/sessions/{sid}/answer", json={"answer": "no"})
        live = client.get(f"/api/sessions/{sid}").json()

    snapshot = json.loads((data_dir / f"{sid}.json").read_text())["snapshot"]
    restarted = create_app(data_dir=data_dir)
    with TestClient(restarted) as client:
        replayed = client.get(f"/api/sessions/{sid}").json()
    for a, b in zip(replayed["diagnoses"], snapshot["diagnoses"]):
        assert a["axiom_ids"] == b["axiom_ids"]
        assert abs(a["probability"] - b["probability"]) <= 1e-9
    assert replayed["status"] == live["status"]


def test_corrupt_record_isolated(tmp_path):
    data_dir = tmp_path / "store"
    app = create_app(data_dir=data_dir)
    with TestClient(app) as client:
        good = create_kb_c_with(client)
        bad = create_kb_c_with(client)
    (data_dir / f"{bad}.json").write_text("{ not json")

    restarted = create_app(data_dir=data_dir)
    with TestClient(restarted) as client:
        assert client.get(f"/api/sessions/{good}").status_code == 200
        assert client.get(f"/api/sessions/{bad}").status_code == 500
        listed = client.get("/api/sessions").json()["sessions"]
        assert {s["id"] for s in listed} == {good}


def create_kb_c_with(client):
    return client.post("/api/sessions", json={
        "kb_text": KB_C_TEXT, "strategy": "entropy"}).json()["id"]


def test_concurrent_answers_one_wins(client):
    sid = create_kb_c(client).json()["id"]
    codes = []
    barrier = threading.Barrier(2)

    def answer():
        barrier.wait()
        codes.append(client.post(f"/api/sessions/{sid}/answer",
                                 json={"answer": "yes"}).status_code)

    threads = [threading.Thread(target=answer) for _ in range(2)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert sorted(codes) == [200, 409]


def test_no_tmp_files_left_behind(tmp_path):
    data_dir = tmp_path / "store"
    app = create_app(data_dir=data_dir)
    with TestClient(app) as client:
        create_kb_c_with(client)
    assert not list(data_dir.glob("*.tmp"))
    assert len(list(data_dir.glob("*.json"))) == 1
