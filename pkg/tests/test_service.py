from __future__ import annotations

import threading
import time

import pytest
from fastapi.testclient import TestClient

from paperwave.errors import ProviderUnreachable
from paperwave.options import RecordingRequest
from paperwave.pipeline import PipelineConfig
from paperwave.providers import OfflineLLMProvider
from paperwave.schemas import validate_payload
from paperwave.service import JobRunner, JobRunnerConfig, create_app
from paperwave.store import EpisodeStore

FIXTURE_FIELDS = {
    "title": "Service Test Episode",
    "minutes": "3",
    "language": "en",
    "model": "mock",
}


@pytest.fixture
def store(tmp_path) -> EpisodeStore:
    return EpisodeStore(tmp_path / "store")


@pytest.fixture
def client(store) -> TestClient:
    return TestClient(create_app(store))


def post_recording(client, fixture_pdf, **overrides):
    fields = {**FIXTURE_FIELDS, **overrides}
    return client.post(
        "/recordings",
        data=fields,
        files=[("pdf", ("sample.pdf", fixture_pdf, "application/pdf"))],
    )


# --- POST /recordings -----------------------------------------------------


def test_post_recording_accepted(client, fixture_pdf):
    resp = post_recording(client, fixture_pdf)
    assert resp.status_code == 202
    body = resp.json()
    assert body["status"] == "pending"
    assert body["id"]
    validate_payload("episode", body)


def test_post_without_pdf_is_400(client):
    resp = client.post("/recordings", data=FIXTURE_FIELDS)
    assert resp.status_code == 400
    assert resp.json()["field"] == "source_papers"


def test_post_bad_language_is_400(client, fixture_pdf):
    resp = post_recording(client, fixture_pdf, language="de")
    assert resp.status_code == 400
    assert resp.json()["field"] == "language"


def test_post_oversized_upload_is_413(store, fixture_pdf):
    client = TestClient(create_app(store, upload_limit=1024))
    resp = post_recording(client, fixture_pdf)
    assert resp.status_code == 413


# --- GET endpoints --------------------------------------------------------


def test_get_unknown_episode_is_404(client):
    assert client.get("/episodes/nope").status_code == 404


def test_get_audio_of_pending_episode_is_409(client, fixture_pdf):
    episode_id = post_recording(client, fixture_pdf).json()["id"]
    resp = client.get(f"/episodes/{episode_id}/audio")
    assert resp.status_code == 409


def test_unknown_channel_is_404(client):
    assert client.get("/channels/nobody/episodes").status_code == 404


def test_list_endpoints_validate_against_schemas(client, fixture_pdf):
    post_recording(client, fixture_pdf)
    post_recording(client, fixture_pdf, title="Two", channel="alice")
    episodes = client.get("/episodes").json()
    validate_payload("episode_list", episodes)
    channels = client.get("/channels").json()
    validate_payload("channel_list", channels)
    members = client.get("/channels/alice/episodes").json()
    validate_payload("episode_list", members)
    assert len(members) == 1


# --- audio serving with ranges --------------------------------------------


def _complete_episode(store, fixture_pdf, blob=b"RIFFfakewavdata0123456789"):
    episode = store.create_episode(RecordingRequest(
        title="Done", minutes=3, language="en", model_id="m",
        papers=[("p.pdf", fixture_pdf)],
    ))
    store.transition(episode.id, "recording")
    key = store.put_blob(blob)
    store.transition(episode.id, "complete",
                     {"audio_ref": key, "duration_sec": 12.5})
    return episode.id, blob


def test_full_audio_download(client, store, fixture_pdf):
    episode_id, blob = _complete_episode(store, fixture_pdf)
    resp = client.get(f"/episodes/{episode_id}/audio")
    assert resp.status_code == 200
    assert resp.content == blob
    assert resp.headers["accept-ranges"] == "bytes"


def test_range_request_serves_exact_tail(client, store, fixture_pdf):
    episode_id, blob = _complete_episode(store, fixture_pdf)
    half = len(blob) // 2
    resp = client.get(f"/episodes/{episode_id}/audio",
                      headers={"Range": f"bytes={half}-"})
    assert resp.status_code == 206
    assert resp.content == blob[half:]
    assert resp.headers["content-range"] == f"bytes {half}-{len(blob) - 1}/{len(blob)}"


def test_range_request_bounded_slice(client, store, fixture_pdf):
    episode_id, blob = _complete_episode(store, fixture_pdf)
    resp = client.get(f"/episodes/{episode_id}/audio",
                      headers={"Range": "bytes=2-5"})
    assert resp.status_code == 206
    assert resp.content == blob[2:6]


def test_range_request_suffix_form(client, store, fixture_pdf):
    episode_id, blob = _complete_episode(store, fixture_pdf)
    resp = client.get(f"/episodes/{episode_id}/audio",
                      headers={"Range": "bytes=-4"})
    assert resp.status_code == 206
    assert resp.content == blob[-4:]


def test_range_request_out_of_bounds_is_416(client, store, fixture_pdf):
    episode_id, blob = _complete_episode(store, fixture_pdf)
    resp = client.get(f"/episodes/{episode_id}/audio",
                      headers={"Range": f"bytes={len(blob) + 10}-"})
    assert resp.status_code == 416


# --- job runner -----------------------------------------------------------


def runner_config(**kwargs) -> JobRunnerConfig:
    defaults = dict(worker_count=2, poll_interval=0.05,
                    pipeline=PipelineConfig(offline=True))
    defaults.update(kwargs)
    return JobRunnerConfig(**defaults)


def test_end_to_end_recording_completes(client, store, fixture_pdf):
    episode_id = post_recording(client, fixture_pdf).json()["id"]
    runner = JobRunner(store, runner_config(worker_count=1))
    runner.start()
    try:
        runner.drain(timeout=60)
    finally:
        runner.stop()
    body = client.get(f"/episodes/{episode_id}").json()
    assert body["status"] == "complete"
    assert body["duration_sec"] > 0
    audio = client.get(f"/episodes/{episode_id}/audio")
    assert audio.status_code == 200
    assert audio.content[:4] == b"RIFF"


def test_workers_claim_each_job_exactly_once(store, fixture_pdf):
    client = TestClient(create_app(store))
    ids = [post_recording(client, fixture_pdf, title=f"E{i}").json()["id"]
           for i in range(3)]

    claims: list[str] = []
    original = store.claim_pending
    lock = threading.Lock()

    def instrumented():
        episode = original()
        if episode is not None:
            with lock:
                claims.append(episode.id)
        return episode

    store.claim_pending = instrumented
    runner = JobRunner(store, runner_config(worker_count=2))
    runner.start()
    try:
        runner.drain(timeout=120)
    finally:
        runner.stop()

    assert sorted(claims) == sorted(ids)  # each claimed exactly once
    for episode_id in ids:
        assert store.get_episode(episode_id).status == "complete"


def test_provider_outage_fails_only_that_episode(store, fixture_pdf):
    client = TestClient(create_app(store))
    failing_id = post_recording(client, fixture_pdf, title="will-fail").json()["id"]
    ok_id = post_recording(client, fixture_pdf, title="will-pass").json()["id"]

    outage = ProviderUnreachable("LLM endpoint failed: connection refused")
    healthy = OfflineLLMProvider()

    class FlakyLLM:
        def complete(self, system, user):
            # the first episode's calls blow up; later ones succeed
            if store.get_episode(failing_id).status == "recording":
                raise outage
            return healthy.complete(system, user)

    runner = JobRunner(store, runner_config(worker_count=1), llm=FlakyLLM())
    runner.start()
    try:
        runner.drain(timeout=120)
    finally:
        runner.stop()

    failed = store.get_episode(failing_id)
    assert failed.status == "failed"
    assert "ProviderUnreachable" in failed.failure_reason
    assert store.get_episode(ok_id).status == "complete"


def test_idle_runner_makes_no_store_writes(store):
    runner = JobRunner(store, runner_config(worker_count=1))
    runner.start()
    time.sleep(0.3)
    runner.stop()
    assert store.list_episodes() == []


def test_runner_recovers_interrupted_on_start(store, fixture_pdf):
    episode = store.create_episode(RecordingRequest(
        title="orphan", minutes=3, language="en", model_id="m",
        papers=[("p.pdf", fixture_pdf)],
    ))
    store.transition(episode.id, "recording")
    runner = JobRunner(store, runner_config(worker_count=1))
    runner.start()
    runner.stop()
    assert store.get_episode(episode.id).status == "failed"
    assert store.get_episode(episode.id).failure_reason == "interrupted"
