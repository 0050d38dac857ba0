"""HTTP service: endpoints, optimistic concurrency, error mapping."""

import concurrent.futures
import threading

import pytest
from fastapi.testclient import TestClient

import reckon.journal as jn
from reckon.service import create_app
from reckon.session import Session
from reckon.scenarios import load_scenario


@pytest.fixture
def client(tmp_path):
    app = create_app(tmp_path / "sessions")
    with TestClient(app) as c:
        c.session_dir = tmp_path / "sessions"
        yield c


def make_session(client, frame=("S", "not-S"), session_id="t1"):
    resp = client.post("/sessions", json={"frame": list(frame), "session_id": session_id})
    assert resp.status_code == 201, resp.text
    return resp.json()


def seed_scenario(client, name):
    built = load_scenario(name)
    path = client.session_dir / f"{name}.sedj"
    target = jn.Journal(path=path)
    state = jn.SessionState()
    for rec in built.journal.records:
        jn.append(target, state, rec.kind, rec.payload)
    return name


class TestLifecycle:
    def test_fresh_session_has_vacuous_belief_at_version_1(self, client):
        created = make_session(client)
        assert created["version"] == 1
        resp = client.get("/sessions/t1")
        assert resp.status_code == 200
        view = resp.json()
        assert view["version"] == 1
        assert view["fusion"]["conflict"] == 0.0
        assert view["fusion"]["masses"] == [{"mass": 1.0, "subset": ["S", "not-S"]}]

    def test_unknown_session_is_404(self, client):
        resp = client.get("/sessions/ghost")
        assert resp.status_code == 404
        assert resp.json()["error"] == "unknown-session"

    def test_full_workflow(self, client):
        make_session(client)
        r = client.post("/sessions/t1/evidence", json={
            "expected_version": 1, "description": "first report", "id": "E1"})
        assert r.status_code == 200 and r.json()["version"] == 2
        r = client.post("/sessions/t1/arguments", json={
            "expected_version": 2, "evidence_id": "E1", "core": ["S"],
            "base_support": 0.9, "id": "A1"})
        assert r.status_code == 200 and r.json()["version"] == 3
        r = client.post("/sessions/t1/ledger/commit", json={
            "expected_version": 3, "kind": "bottom-up",
            "source": ["S", "not-S"], "committed": ["not-S"], "amount": 0.3})
        assert r.status_code == 200
        rid = r.json()["record_id"]
        r = client.get("/sessions/t1/fusion")
        assert r.status_code == 200
        assert r.json()["conflict"] == pytest.approx(0.27)
        r = client.get("/sessions/t1/culpability")
        assert r.status_code == 200
        assert r.json()["entries"][0]["item"] == rid
        r = client.post(f"/sessions/t1/ledger/{rid}/retract",
                        json={"expected_version": 4})
        assert r.status_code == 200
        r = client.get("/sessions/t1/fusion")
        assert r.json()["conflict"] == 0.0

    def test_session_persists_to_disk_and_reloads(self, client, tmp_path):
        make_session(client)
        client.post("/sessions/t1/evidence", json={
            "expected_version": 1, "description": "x", "id": "E1"})
        session = Session.load(client.session_dir / "t1.sedj")
        assert session.version == 2
        assert session.evidence_item("E1").description == "x"


class TestOptimisticConcurrency:
    def test_version_mismatch_is_409_without_side_effects(self, client):
        make_session(client)
        r = client.post("/sessions/t1/evidence", json={
            "expected_version": 7, "description": "stale"})
        assert r.status_code == 409
        assert r.json()["error"] == "version-conflict"
        assert client.get("/sessions/t1").json()["version"] == 1

    def test_concurrent_steps_only_one_wins(self, client):
        seed_scenario(client, "attack-schema")
        version = client.get("/sessions/attack-schema").json()["version"]
        barrier = threading.Barrier(2)

        def step():
            barrier.wait()
            return client.post("/sessions/attack-schema/resolve/step",
                               json={"expected_version": version})

        with concurrent.futures.ThreadPoolExecutor(2) as pool:
            a, b = [f.result() for f in [pool.submit(step), pool.submit(step)]]
        codes = sorted([a.status_code, b.status_code])
        assert codes == [200, 409]
        winner = a if a.status_code == 200 else b
        assert winner.json()["step"]["item"] == "X4"


class TestWhatIfAndVoi:
    def test_whatif_never_journals(self, client):
        seed_scenario(client, "attack-schema")
        before = client.get("/sessions/attack-schema").json()["version"]
        r = client.post("/sessions/attack-schema/whatif", json={"retract": ["X4"]})
        assert r.status_code == 200
        view = r.json()
        assert view["conflict"] == pytest.approx(0.315)
        assert view["version"] == before
        assert client.get("/sessions/attack-schema").json()["version"] == before

    def test_whatif_unknown_item_is_422(self, client):
        seed_scenario(client, "attack-schema")
        r = client.post("/sessions/attack-schema/whatif", json={"retract": ["nope"]})
        assert r.status_code == 422
        assert r.json()["error"] == "not-retractable"

    def test_voi_round_trip(self, client):
        make_session(client)
        client.post("/sessions/t1/evidence", json={
            "expected_version": 1, "description": "r", "id": "E1"})
        client.post("/sessions/t1/arguments", json={
            "expected_version": 2, "evidence_id": "E1", "core": ["S"],
            "base_support": 0.6, "id": "A1"})
        r = client.post("/sessions/t1/voi", json={"answers": [
            {"probability": 0.7, "argument": {"core": ["S"], "base_support": 0.5}},
            {"probability": 0.3, "argument": {"core": ["not-S"], "base_support": 0.95}},
        ]})
        assert r.status_code == 200
        view = r.json()
        assert view["favored"] == "S"
        assert view["flip_probability"] == pytest.approx(0.3)
        assert view["congruence"] == pytest.approx(0.7)


class TestElicitationEndpoints:
    def test_dialogue_over_http(self, client):
        make_session(client)
        client.post("/sessions/t1/evidence", json={
            "expected_version": 1, "description": "trucks moving", "id": "E1"})
        client.post("/sessions/t1/arguments", json={
            "expected_version": 2, "evidence_id": "E1", "core": ["S"],
            "base_support": 1.0, "id": "A1"})
        r = client.post("/sessions/t1/arguments/A1/elicitation",
                        json={"expected_version": 3})
        assert r.status_code == 200
        assert "crystal ball" in r.json()["prompt"]
        r = client.post("/sessions/t1/arguments/A1/elicitation/response", json={
            "expected_version": 4, "description": "sensor drift",
            "probability": 0.3, "impact": {"kind": "undercut"}})
        assert r.status_code == 200
        assert 'qualification 1 ("sensor drift")' in r.json()["next_prompt"]
        r = client.post("/sessions/t1/arguments/A1/elicitation/pass",
                        json={"expected_version": 5})
        assert r.status_code == 200
        view = client.get("/sessions/t1").json()
        assert view["arguments"][0]["exceptions"][0]["description"] == "sensor drift"
        assert view["elicitations"]["A1"]["state"] == "closed"

    def test_exception_status_change_for_one_click_retraction(self, client):
        seed_scenario(client, "attack-schema")
        version = client.get("/sessions/attack-schema").json()["version"]
        top = client.get("/sessions/attack-schema/culpability").json()["entries"][0]
        r = client.post(f"/sessions/attack-schema/exceptions/{top['item']}/status",
                        json={"expected_version": version, "status": "active"})
        assert r.status_code == 200
        fusion = client.get("/sessions/attack-schema/fusion").json()
        assert fusion["conflict"] == pytest.approx(top["conflict_if_retracted"])


class TestErrorMapping:
    def test_malformed_body_is_400(self, client):
        make_session(client)
        r = client.post("/sessions/t1/evidence", json={"description": "missing version"})
        assert r.status_code == 400
        assert r.json()["error"] == "bad-request"

    def test_domain_error_is_422(self, client):
        make_session(client)
        r = client.get("/sessions/t1/culpability")
        assert r.status_code == 422
        assert r.json()["error"] == "no-conflict"

    def test_unknown_argument_is_404(self, client):
        make_session(client)
        r = client.post("/sessions/t1/arguments/A9/elicitation",
                        json={"expected_version": 1})
        assert r.status_code == 404

    def test_duplicate_session_rejected(self, client):
        make_session(client)
        r = client.post("/sessions", json={"frame": ["a", "b"], "session_id": "t1"})
        assert r.status_code == 422


class TestZadehOverHttp:
    def test_conflict_gauge_numbers(self, client):
        seed_scenario(client, "zadeh-pathology")
        fusion = client.get("/sessions/zadeh-pathology/fusion").json()
        assert fusion["conflict"] == pytest.approx(0.9999, abs=1e-9)
        assert fusion["belief"]["S2"] == pytest.approx(1.0, abs=1e-9)
        assert fusion["belief"]["S1"] == 0.0
