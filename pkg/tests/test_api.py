import json

import pytest
from fastapi.testclient import TestClient

from voxmod.audio import encode_wav
from voxmod.classify import save_model
from voxmod.moderation import ItemState
from voxmod.service import MockTranscriptionProvider, PipelineConfig, build_pipeline
from voxmod.service.api import create_app
from voxmod.synth import speech_clip
from voxmod.text.transcript import Transcript, Word

from test_service import small_models  # noqa: F401  (session fixture)


def make_transcript(text, confidences=None):
    words = text.split()
    confidences = confidences or [0.9] * len(words)
    return Transcript(
        words=tuple(Word(w, c) for w, c in zip(words, confidences)),
        language="hi",
        source="mock-asr",
    )


@pytest.fixture
def client(tmp_path, small_models):  # noqa: F811
    blank_model, gender_model = small_models
    provider = MockTranscriptionProvider()
    pipeline = build_pipeline(
        PipelineConfig(data_dir=str(tmp_path / "api-data")), provider=provider
    )
    pipeline.store.install_model("blank", blank_model, "v-blank")
    pipeline.store.install_model("gender", gender_model, "v-gender")
    return TestClient(create_app(pipeline)), pipeline


def upload(client_obj, clip, name="clip.wav"):
    return client_obj.post(
        "/items", files={"file": (name, encode_wav(clip), "audio/wav")}
    )


def seed_pending(client_and_pipeline, rng, text="main purbi champaran se bol raha hun",
                 confidences=None):
    client_obj, pipeline = client_and_pipeline
    clip = speech_clip(f"api-{rng.integers(1e9)}", rng, duration_s=2.0)
    pipeline.provider.add_clip(clip, make_transcript(text, confidences))
    response = upload(client_obj, clip)
    assert response.status_code == 201
    return response.json()["id"]


class TestItemEndpoints:
    def test_upload_returns_id(self, client, rng):
        item_id = seed_pending(client, rng)
        assert len(item_id) == 6

    def test_duplicate_gives_409(self, client, rng):
        client_obj, _ = client
        clip = speech_clip("dup-api", rng, duration_s=2.0)
        assert upload(client_obj, clip).status_code == 201
        assert upload(client_obj, clip).status_code == 409

    def test_garbage_gives_422(self, client):
        client_obj, _ = client
        response = client_obj.post(
            "/items", files={"file": ("x.wav", b"not audio", "audio/wav")}
        )
        assert response.status_code == 422

    def test_get_item_and_spans(self, client, rng):
        item_id = seed_pending(
            client, rng,
            text="patna se ek khabar aayi hai",
            confidences=[0.9, 0.5, 0.4, 0.9, 0.9, 0.9],
        )
        client_obj, pipeline = client
        if pipeline.store.moderation.get(item_id).state != ItemState.PENDING_REVIEW:
            pytest.skip("triage rejected this synthetic clip")
        doc = client_obj.get(f"/items/{item_id}").json()
        assert doc["id"] == item_id
        assert doc["low_confidence_spans"] == [[1, 2]]
        assert doc["stt"]["words"][0]["text"] == "patna"

    def test_missing_item_404(self, client):
        client_obj, _ = client
        assert client_obj.get("/items/424242").status_code == 404

    def test_queue_listing_pagination(self, client, rng):
        client_obj, pipeline = client
        for _ in range(3):
            seed_pending(client, rng)
        listing = client_obj.get("/items", params={"page": 1, "per_page": 2}).json()
        assert listing["total"] >= 3
        assert len(listing["items"]) == 2
        filtered = client_obj.get("/items", params={"state": "pending_review"}).json()
        assert all(i["state"] == "pending_review" for i in filtered["items"])

    def test_audio_blob_round_trip(self, client, rng):
        client_obj, _ = client
        clip = speech_clip("blob-api", rng, duration_s=2.0)
        item_id = upload(client_obj, clip).json()["id"]
        audio = client_obj.get(f"/items/{item_id}/audio")
        assert audio.status_code == 200
        assert audio.headers["content-type"] == "audio/wav"
        assert audio.content[:4] == b"RIFF"


def decision_body(action="accept", kind="gist", assistance="partial", reason=None,
                  timings=(), metadata=None):
    return {
        "decision": {
            "action": action,
            "rejection_reason": reason,
            "transcription_outcome": (
                {"kind": "skipped", "assistance": None}
                if kind == "skipped"
                else {"kind": kind, "assistance": assistance}
            ),
            "moderator_id": "mod-9",
            "decided_at": "2024-03-02T09:30:00+00:00",
        },
        "metadata": metadata or {"gender": "female", "rating": 4},
        "timings": list(timings),
    }


class TestDecisionEndpoint:
    def test_accept_flow(self, client, rng):
        item_id = seed_pending(client, rng)
        client_obj, pipeline = client
        if pipeline.store.moderation.get(item_id).state != ItemState.PENDING_REVIEW:
            pytest.skip("triage rejected this synthetic clip")
        body = decision_body(
            timings=[
                {"task": "triage", "seconds": 4.2, "phase": "with_automation"},
                {"task": "metadata", "seconds": 41.0, "phase": "with_automation"},
                {"task": "transcription", "seconds": 66.0, "phase": "with_automation"},
            ]
        )
        response = client_obj.post(f"/items/{item_id}/decision", json=body)
        assert response.status_code == 200
        doc = response.json()
        assert doc["state"] == "accepted"
        assert doc["metadata"]["gender"] == "female"
        assert len(doc["timings"]) == 3

    def test_double_decision_409(self, client, rng):
        item_id = seed_pending(client, rng)
        client_obj, pipeline = client
        if pipeline.store.moderation.get(item_id).state != ItemState.PENDING_REVIEW:
            pytest.skip("triage rejected this synthetic clip")
        assert client_obj.post(f"/items/{item_id}/decision", json=decision_body()).status_code == 200
        assert client_obj.post(f"/items/{item_id}/decision", json=decision_body()).status_code == 409

    def test_bad_rating_422(self, client, rng):
        item_id = seed_pending(client, rng)
        client_obj, pipeline = client
        if pipeline.store.moderation.get(item_id).state != ItemState.PENDING_REVIEW:
            pytest.skip("triage rejected this synthetic clip")
        body = decision_body(metadata={"gender": "male", "rating": 11})
        assert client_obj.post(f"/items/{item_id}/decision", json=body).status_code == 422

    def test_reject_needs_reason_422(self, client, rng):
        item_id = seed_pending(client, rng)
        client_obj, pipeline = client
        if pipeline.store.moderation.get(item_id).state != ItemState.PENDING_REVIEW:
            pytest.skip("triage rejected this synthetic clip")
        body = decision_body(action="reject", reason=None)
        assert client_obj.post(f"/items/{item_id}/decision", json=body).status_code == 422


class TestReportEndpoints:
    def test_cost_report_defaults(self, client):
        client_obj, _ = client
        doc = client_obj.get("/reports/cost", params={"stt_flat_cost": 1.45}).json()
        assert doc["per_item_manual_cost"] == pytest.approx(8.33, abs=0.05)
        assert doc["cost_saving_ratio"] == pytest.approx(0.17, abs=0.01)

    def test_time_saving_no_data_404(self, client):
        client_obj, _ = client
        assert client_obj.get("/reports/time-saving", params={"task": "gist"}).status_code == 404

    def test_time_saving_after_decisions(self, client, rng):
        client_obj, pipeline = client
        decided = 0
        for _ in range(4):
            item_id = seed_pending(client, rng)
            if pipeline.store.moderation.get(item_id).state != ItemState.PENDING_REVIEW:
                continue
            phase = "with_automation" if decided % 2 else "without_automation"
            body = decision_body(
                timings=[{"task": "transcription", "seconds": 50.0 + decided, "phase": phase}]
            )
            assert client_obj.post(f"/items/{item_id}/decision", json=body).status_code == 200
            decided += 1
        if decided == 0:
            pytest.skip("all synthetic clips auto-rejected")
        doc = client_obj.get("/reports/time-saving", params={"task": "gist"}).json()
        assert set(doc["bins"]) == {"10-20", "20-40", "40-60", "60-100", ">100"}

    def test_dashboard(self, client, rng):
        client_obj, pipeline = client
        item_id = seed_pending(client, rng)
        if pipeline.store.moderation.get(item_id).state == ItemState.PENDING_REVIEW:
            client_obj.post(f"/items/{item_id}/decision", json=decision_body())
            cells = client_obj.get("/dashboard/locations").json()
            assert any(c["state"] == "Bihar" for c in cells)

    def test_feedback_export_csv(self, client, rng):
        client_obj, pipeline = client
        item_id = seed_pending(client, rng)
        if pipeline.store.moderation.get(item_id).state != ItemState.PENDING_REVIEW:
            pytest.skip("triage rejected this synthetic clip")
        client_obj.post(f"/items/{item_id}/decision", json=decision_body())
        response = client_obj.get("/feedback/export", params={"kind": "blank"})
        assert response.status_code == 200
        assert response.text.startswith("clip_id,label,f0")

    def test_models_endpoint_and_swap(self, client, small_models):  # noqa: F811
        client_obj, _ = client
        blank_model, _ = small_models
        doc = client_obj.get("/models").json()
        assert doc["blank"]["installed"] and doc["gender"]["installed"]
        response = client_obj.post("/models/blank", content=save_model(blank_model))
        assert response.status_code == 200
        version = response.json()["version"]
        assert client_obj.get("/models").json()["blank"]["version"] == version

    def test_corrupt_model_swap_422(self, client):
        client_obj, _ = client
        assert client_obj.post("/models/blank", content=b"junk").status_code == 422


class TestAuth:
    def test_token_enforced(self, tmp_path, small_models):  # noqa: F811
        blank_model, _ = small_models
        pipeline = build_pipeline(
            PipelineConfig(data_dir=str(tmp_path / "auth-data"), api_token="sekret"),
            provider=MockTranscriptionProvider(),
        )
        pipeline.store.install_model("blank", blank_model, "v")
        client_obj = TestClient(create_app(pipeline))
        assert client_obj.get("/models").status_code == 401
        ok = client_obj.get("/models", headers={"Authorization": "Bearer sekret"})
        assert ok.status_code == 200
