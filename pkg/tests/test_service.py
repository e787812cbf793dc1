"""HTTP session service: wire shapes, error codes, terminal-mode parity."""

import pytest
from fastapi.testclient import TestClient

from weighwright.core import SYMBOL_OF_DIGIT, Semantics, run_strategy
from weighwright.service import create_app
from weighwright.session import Session


@pytest.fixture()
def client():
    return TestClient(create_app())


def drive(client, sid, symbols):
    for sym in symbols:
        r = client.post(f"/sessions/{sid}/outcome", json={"outcome": sym})
        assert r.status_code == 200, r.text
    return client.get(f"/sessions/{sid}/next").json()


class TestSessions:
    def test_create_and_first_weighing(self, client):
        r = client.post("/sessions", json={"n": 11})
        assert r.status_code == 200
        sid = r.json()["id"]
        nxt = client.get(f"/sessions/{sid}/next").json()
        assert nxt["left"] == {"coins": [1, 2, 3], "refs": 0}
        assert nxt["right"] == {"coins": [4, 5, 6], "refs": 0}
        assert nxt["weighing_index"] == 1

    def test_classify_single_fake(self, client, alg1_sort):
        _, path, _ = run_strategy(alg1_sort, 1)
        r = client.post("/sessions", json={"n": 11})
        sid = r.json()["id"]
        nxt = drive(client, sid, [SYMBOL_OF_DIGIT[d] for d in path])
        assert nxt == {"done": True, "result": {"uniform": False, "fakes": [1]}}

    def test_all_equal_reports_uniform(self, client):
        sid = client.post("/sessions", json={"n": 11}).json()["id"]
        nxt = drive(client, sid, ["="] * 6)
        assert nxt["done"] and nxt["result"]["uniform"]

    def test_contradiction_409_keeps_state(self, client):
        sid = client.post("/sessions", json={"n": 1, "semantics": "exact"}).json()["id"]
        before = client.get(f"/sessions/{sid}/next").json()
        r = client.post(f"/sessions/{sid}/outcome", json={"outcome": "<"})
        assert r.status_code == 409
        assert "contradictory" in r.json()["detail"]
        assert client.get(f"/sessions/{sid}/next").json() == before

    def test_history_endpoint(self, client):
        sid = client.post("/sessions", json={"n": 11}).json()["id"]
        drive(client, sid, [">", "="])
        doc = client.get(f"/sessions/{sid}").json()
        assert doc["status"] == "awaiting-outcome"
        assert [h["outcome"] for h in doc["history"]] == [">", "="]
        assert doc["history"][0]["left"]["coins"] == [1, 2, 3]

    def test_packaged_tree_reference(self, client):
        sid = client.post("/sessions", json={"tree": "alg2"}).json()["id"]
        nxt = client.get(f"/sessions/{sid}/next").json()
        assert nxt["left"]["coins"] == [1, 2, 3]

    def test_unknown_session_404(self, client):
        assert client.get("/sessions/zzz/next").status_code == 404

    def test_unknown_tree_404(self, client):
        assert client.post("/sessions", json={"tree": "nope"}).status_code == 404

    def test_validation_errors(self, client):
        assert client.post("/sessions", json={}).status_code == 422
        assert client.post("/sessions", json={"n": 5, "tree": "alg1"}).status_code == 422
        sid = client.post("/sessions", json={"n": 2}).json()["id"]
        r = client.post(f"/sessions/{sid}/outcome", json={"outcome": "?"})
        assert r.status_code == 422

    def test_finished_session_rejects_outcomes(self, client):
        sid = client.post("/sessions", json={"n": 2}).json()["id"]
        drive(client, sid, ["="])
        r = client.post(f"/sessions/{sid}/outcome", json={"outcome": "="})
        assert r.status_code == 409


class TestScriptedSequences:
    """The exact weighing transcripts the browser client's mock replays."""

    def test_fake_coin_one_transcript(self, client):
        expected = [
            ([1, 2, 3], [4, 5, 6]), ([1, 7, 8], [2, 9, 10]),
            ([5, 7, 9], [6, 8, 10]), ([2, 9, 11], [3, 4, 5]),
            ([2, 6, 8], [3, 5, 11]), ([4], [9]), ([10], [11]),
        ]
        sid = client.post("/sessions", json={"n": 11}).json()["id"]
        for i, sym in enumerate([">", ">", "=", "=", "=", "=", "="]):
            nxt = client.get(f"/sessions/{sid}/next").json()
            assert (nxt["left"]["coins"], nxt["right"]["coins"]) == expected[i]
            client.post(f"/sessions/{sid}/outcome", json={"outcome": sym})
        done = client.get(f"/sessions/{sid}/next").json()
        assert done["result"] == {"uniform": False, "fakes": [1]}

    def test_uniform_transcript(self, client):
        expected = [
            ([1, 2, 3], [4, 5, 6]), ([1, 7, 8], [4, 9, 10]),
            ([1, 2, 7], [3, 4, 8]), ([1, 3], [2, 4]),
            ([1, 2], [10, 11]), ([1], [2]),
        ]
        sid = client.post("/sessions", json={"n": 11}).json()["id"]
        for pans in expected:
            nxt = client.get(f"/sessions/{sid}/next").json()
            assert (nxt["left"]["coins"], nxt["right"]["coins"]) == pans
            client.post(f"/sessions/{sid}/outcome", json={"outcome": "="})
        assert client.get(f"/sessions/{sid}/next").json()["result"]["uniform"]


class TestTerminalParity:
    def test_same_weighing_sequence_as_direct_session(self, client):
        """The service and the in-process session present identical weighings
        for identical outcome histories."""
        outcomes = [">", "=", "<", "=", ">"]
        sid = client.post("/sessions", json={"n": 11}).json()["id"]
        local = Session.for_n(11, Semantics.SORT_CLASSES)
        for sym in outcomes:
            remote = client.get(f"/sessions/{sid}/next").json()
            mine = local.next_doc()
            assert remote == mine
            client.post(f"/sessions/{sid}/outcome", json={"outcome": sym})
            local.submit_symbol(sym)
        assert client.get(f"/sessions/{sid}/next").json() == local.next_doc()
