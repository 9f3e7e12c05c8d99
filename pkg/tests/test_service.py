import json

import pytest
from fastapi.testclient import TestClient

from talkcoach.config import AppConfig
from talkcoach.service.app import create_app
from talkcoach.speech import StubSynthesizer, write_wav_fixture
from talkcoach.store import UserRegistry

from conftest import GoldenUser


@pytest.fixture()
def config(tmp_path):
    return AppConfig(store_path=str(tmp_path / "store"), min_user_turns=8, min_elapsed_ms=10**9)


@pytest.fixture()
def client(config):
    return TestClient(create_app(config))


def run_golden(client, name_hint=None, max_turns=80):
    body = {"name_hint": name_hint} if name_hint else {}
    created = client.post("/sessions", json=body).json()
    sid = created["session_id"]
    states = [created["state"]]
    texts = [created["bot_text"]]
    user = GoldenUser()
    done = False
    for _ in range(max_turns):
        if done:
            break
        text, duration = user.reply(states[-1])
        response = client.post(
            f"/sessions/{sid}/turn", json={"text": text, "duration_ms": duration}
        )
        assert response.status_code == 200, response.text
        payload = response.json()
        states.append(payload["state"])
        texts.append(payload["bot_text"])
        done = payload["done"]
    return sid, states, texts, done


class TestHealth:
    def test_health_endpoint(self, client):
        assert client.get("/health").json()["status"] == "ok"


class TestCreateSession:
    def test_new_name_gets_intro_greeting(self, client):
        payload = client.post("/sessions", json={}).json()
        assert "what is your name" in payload["bot_text"].lower()
        assert payload["state"] == "intro_new_user"

    def test_registered_name_gets_returning_greeting(self, config):
        client = TestClient(create_app(config))
        run_golden(client, name_hint="Max")
        payload = client.post("/sessions", json={"name_hint": "Max"}).json()
        assert payload["state"] == "intro_returning"
        assert "welcome back" in payload["bot_text"].lower()

    def test_malformed_body_is_400(self, client):
        response = client.post("/sessions", json={"name_hint": 12.5})
        assert response.status_code == 400


class TestTurn:
    def test_unknown_session_404(self, client):
        assert client.post("/sessions/nope/turn", json={"text": "hi"}).status_code == 404

    def test_both_text_and_audio_is_400(self, client, tmp_path):
        sid = client.post("/sessions", json={}).json()["session_id"]
        response = client.post(
            f"/sessions/{sid}/turn", json={"text": "hi", "audio_ref": "x.wav"}
        )
        assert response.status_code == 400

    def test_neither_text_nor_audio_is_400(self, client):
        sid = client.post("/sessions", json={}).json()["session_id"]
        assert client.post(f"/sessions/{sid}/turn", json={}).status_code == 400

    def test_turn_on_ended_session_is_409(self, client):
        sid, _, _, done = run_golden(client)
        assert done
        response = client.post(f"/sessions/{sid}/turn", json={"text": "hello again"})
        assert response.status_code == 409

    def test_busy_session_is_409(self, config):
        app = create_app(config)
        client = TestClient(app)
        sid = client.post("/sessions", json={}).json()["session_id"]
        session = app.state.hub.get(sid)
        assert session.try_acquire()
        try:
            response = client.post(f"/sessions/{sid}/turn", json={"text": "hi"})
            assert response.status_code == 409
        finally:
            session.release()

    def test_audio_stub_turn_equivalent_to_text_turn(self, config, tmp_path):
        app = create_app(config)
        client = TestClient(app)

        def one_turn(kind):
            sid = client.post("/sessions", json={}).json()["session_id"]
            if kind == "text":
                body = {"text": "my name is Ada", "duration_ms": 1500}
            else:
                stub = tmp_path / f"{kind}-turn.txt"
                stub.write_text("duration_ms: 1500\nmy name is Ada", encoding="utf-8")
                body = {"audio_ref": str(stub)}
            return client.post(f"/sessions/{sid}/turn", json=body).json()

        text_reply = one_turn("text")
        audio_reply = one_turn("audio")
        assert text_reply == audio_reply

    def test_silent_wav_reprompts(self, config, tmp_path):
        app = create_app(config)
        client = TestClient(app)
        sid = client.post("/sessions", json={}).json()["session_id"]
        wav = tmp_path / "silence.wav"
        write_wav_fixture(wav, frames=88_200)
        response = client.post(f"/sessions/{sid}/turn", json={"audio_ref": str(wav)})
        assert response.status_code == 200
        assert "didn't quite catch" in response.json()["bot_text"]

    def test_unreadable_audio_reprompts_with_200(self, config, tmp_path):
        app = create_app(config)
        client = TestClient(app)
        sid = client.post("/sessions", json={}).json()["session_id"]
        bad = tmp_path / "broken.wav"
        bad.write_bytes(b"RIFFnope")
        response = client.post(f"/sessions/{sid}/turn", json={"audio_ref": str(bad)})
        assert response.status_code == 200
        assert response.json()["bot_text"]


class TestReport:
    def test_report_before_feedback_is_409(self, client):
        sid = client.post("/sessions", json={}).json()["session_id"]
        assert client.get(f"/sessions/{sid}/report").status_code == 409

    def test_report_unknown_session_404(self, client):
        assert client.get("/sessions/ghost/report").status_code == 404

    def test_report_after_end_has_five_metrics(self, client):
        sid, states, _, done = run_golden(client)
        assert done and "end" in states
        report = client.get(f"/sessions/{sid}/report").json()
        for key in ("awkward", "questions", "pace", "tics", "acknowledgment"):
            assert key in report
            assert report[key]["verdict"] in {"good", "needs_work", "inconclusive"}

    def test_feedback_not_entered_before_budget(self, client):
        _, states, _, _ = run_golden(client)
        first_feedback = states.index("feedback_delivery")
        assert first_feedback >= 8  # min_user_turns in this fixture


class TestPersistence:
    def test_session_persisted_at_end(self, config):
        client = TestClient(create_app(config))
        sid, _, _, done = run_golden(client, name_hint="Max")
        assert done
        registry = UserRegistry(config.store_path)
        profile = registry.lookup("max")
        assert profile is not None
        assert profile.last_rating == 5
        session_dir = registry.session_dir(profile.sessions[-1])
        assert (session_dir / "transcript.jsonl").exists()
        assert (session_dir / "report.json").exists()
        assert (session_dir / "survey.json").exists()

    def test_restart_preserves_artifacts(self, config):
        client = TestClient(create_app(config))
        run_golden(client, name_hint="Max")
        # a brand-new app over the same store still sees the user
        fresh = TestClient(create_app(config))
        payload = fresh.post("/sessions", json={"name_hint": "Max"}).json()
        assert payload["state"] == "intro_returning"


class TestDeterminism:
    def test_identical_scripts_identical_traces_and_reports(self, tmp_path):
        outputs = []
        for run in range(2):
            cfg = AppConfig(
                store_path=str(tmp_path / f"store{run}"), min_user_turns=8, min_elapsed_ms=10**9
            )
            client = TestClient(create_app(cfg))
            sid, states, texts, done = run_golden(client)
            assert done
            report = client.get(f"/sessions/{sid}/report").json()
            report.pop("generated_at")
            outputs.append((states, texts, json.dumps(report, sort_keys=True)))
        assert outputs[0] == outputs[1]

    def test_synthesizer_audio_refs_returned(self, tmp_path):
        cfg = AppConfig(store_path=str(tmp_path / "store"), min_user_turns=8, min_elapsed_ms=10**9)
        app = create_app(cfg, synthesizer=StubSynthesizer(tmp_path / "audio"))
        client = TestClient(app)
        sid = client.post("/sessions", json={}).json()["session_id"]
        payload = client.post(f"/sessions/{sid}/turn", json={"text": "my name is Max"}).json()
        assert payload["bot_audio_ref"] is not None
