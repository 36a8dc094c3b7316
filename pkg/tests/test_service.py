"""HTTP surface: endpoint contract and the event stream."""

from __future__ import annotations

import time

import pytest
from fastapi.testclient import TestClient

from autonet.runner import RunSpec, build_runtime
from autonet.service.app import create_app
from autonet.service.serve import ServeRuntime


@pytest.fixture
def served():
    spec = RunSpec.resolve("latency_drift", phase="single", seed=1)
    runtime = build_runtime(spec)
    serve = ServeRuntime(runtime, until=spec.until, pace_sim_ms=2500,
                         loop_sleep_s=0.002)
    serve.start()
    client = TestClient(create_app(serve))
    deadline = time.monotonic() + 5.0
    while serve.runtime.now < spec.until and time.monotonic() < deadline:
        time.sleep(0.01)
    yield client, serve
    serve.stop()


class TestEndpoints:
    def test_snapshot_contract(self, served):
        client, serve = served
        body = client.get("/snapshot").json()
        assert body["schema_version"] == 1
        assert body["t"] == serve.runtime.now
        assert body["services"]["L1"]["latency_ms"] == 6.0
        assert body["services"]["L1"]["working"] == ["NE1", "NE2", "NE5", "NE9"]
        assert "elements" in body["resources"] and "links" in body["resources"]

    def test_intent_roundtrip(self, served):
        client, _ = served
        response = client.post("/intent", json={
            "text": "reduce the latency of region A by 2% "
                    "without affecting other KPIs"})
        assert response.status_code == 200
        body = response.json()
        assert body["destination"] == "INTENT_MANAGEMENT"
        assert body["accepted"]

    def test_unparseable_intent_is_422_with_span(self, served):
        client, _ = served
        response = client.post("/intent", json={"text": "gibberish request"})
        assert response.status_code == 422
        body = response.json()
        assert body["error"] == "UNPARSEABLE"
        assert body["span"] == [0, len("gibberish")]

    def test_goal_action_feedback_endpoints(self, served):
        client, _ = served
        goal = client.post("/goal", json={
            "id": "restore_protection:L1", "kind": "RESTORE_PROTECTION",
            "service": "L1", "weight": 8.0}).json()
        assert goal["destination"] == "GOAL_MANAGEMENT"
        action = client.post("/action", json={
            "kind": "SWITCHOVER", "service": "L1"}).json()
        assert action["destination"] == "DECISION_MAKING"
        feedback = client.post("/feedback", json={
            "feedback": "looks right", "subject": "reroute"}).json()
        assert feedback["destination"] == "SELF_AWARENESS"

    def test_takeover_toggle(self, served):
        client, serve = served
        on = client.post("/takeover", json={"enabled": True}).json()
        assert on["detail"]["enabled"] is True
        assert client.get("/snapshot").json()["takeover"] is True
        off = client.post("/takeover", json={"enabled": False}).json()
        assert off["detail"]["enabled"] is False

    def test_solve_backends(self, served):
        client, _ = served
        forecast = client.post("/solve", json={
            "text": "forecast L1 latency next window"}).json()
        assert forecast["backend"] == "PREDICTOR"
        stub = client.post("/solve", json={"text": "hello there"}).json()
        assert stub["backend"] == "COPILOT_STUB"
        assert stub["detail"]["reason"] == "NOT_AVAILABLE"


class TestEventStream:
    def test_stream_replays_in_server_order(self, served):
        client, serve = served
        with client.websocket_connect("/events") as ws:
            received = [ws.receive_json() for _ in range(20)]
        seqs = [r["seq"] for r in received]
        assert seqs == sorted(seqs)
        assert seqs == list(range(seqs[0], seqs[0] + len(seqs)))
        expected = [r.payload for r in serve.runtime.trace.records[:20]]
        assert [r["payload"] for r in received][:5] == expected[:5]

    def test_submission_events_appear_on_stream(self, served):
        client, _ = served
        with client.websocket_connect("/events") as ws:
            client.post("/intent", json={"text": "reduce latency of L1 by 2 ms"})
            saw_receipt = saw_intent_need = False
            for _ in range(600):
                record = ws.receive_json()
                if record["stage"] == "hai":
                    saw_receipt = True
                if record["stage"] == "need" and \
                        record["payload"].get("condition") == "human-intent":
                    saw_intent_need = True
                    break
            assert saw_receipt
            assert saw_intent_need
