"""HTTP API over the store plus the background job runner that drives the
pipeline for pending episodes."""

from __future__ import annotations

import logging
import threading
import time
from dataclasses import dataclass, field

from fastapi import FastAPI, Request, Response
from fastapi.responses import JSONResponse

from .errors import UnknownChannel, UnknownEpisode, ValidationFailed
from .options import RecordingRequest
from .pipeline import PipelineConfig, run_episode_job
from .store import EpisodeStore

log = logging.getLogger("paperwave.service")

DEFAULT_UPLOAD_LIMIT = 50 * 1024 * 1024


@dataclass
class JobRunnerConfig:
    worker_count: int = 2
    poll_interval: float = 0.2
    pipeline: PipelineConfig = field(default_factory=PipelineConfig)

    def __post_init__(self):
        if not 1 <= self.worker_count <= 8:
            raise ValueError("worker_count must be in [1, 8]")


class JobRunner:
    """Polls the store for pending episodes and runs the pipeline on a
    small worker pool. Failures settle into the episode, never crash a
    worker."""

    def __init__(self, store: EpisodeStore, cfg: JobRunnerConfig,
                 llm=None, tts=None):
        self.store = store
        self.cfg = cfg
        self.llm = llm
        self.tts = tts
        self._stop = threading.Event()
        self._threads: list[threading.Thread] = []

    def start(self) -> None:
        self.store.recover_interrupted()
        for i in range(self.cfg.worker_count):
            t = threading.Thread(target=self._worker, name=f"job-worker-{i}",
                                 daemon=True)
            t.start()
            self._threads.append(t)

    def stop(self, timeout: float = 10.0) -> None:
        self._stop.set()
        for t in self._threads:
            t.join(timeout)

    def drain(self, timeout: float = 60.0) -> None:
        """Block until no episode is pending or recording (test helper)."""
        deadline = time.monotonic() + timeout
        while time.monotonic() < deadline:
            busy = [e for e in self.store.list_episodes()
                    if e.status in ("pending", "recording")]
            if not busy:
                return
            time.sleep(0.05)
        raise TimeoutError("job runner did not drain in time")

    def _worker(self) -> None:
        while not self._stop.is_set():
            try:
                episode = self.store.claim_pending()
            except Exception:
                log.exception("claim failed")
                episode = None
            if episode is None:
                self._stop.wait(self.cfg.poll_interval)
                continue
            run_episode_job(self.store, episode, self.cfg.pipeline,
                            llm=self.llm, tts=self.tts)


# --- HTTP API -------------------------------------------------------------


def create_app(store: EpisodeStore,
               upload_limit: int = DEFAULT_UPLOAD_LIMIT) -> FastAPI:
    app = FastAPI(title="paperwave", docs_url=None, redoc_url=None)

    @app.exception_handler(ValidationFailed)
    async def _validation(_, exc: ValidationFailed):
        return JSONResponse(
            status_code=400,
            content={"error": "ValidationFailed",
                     "field": exc.field, "reason": exc.reason},
        )

    @app.exception_handler(UnknownEpisode)
    async def _unknown_episode(_, exc):
        return JSONResponse(status_code=404,
                            content={"error": "UnknownEpisode", "id": str(exc)})

    @app.exception_handler(UnknownChannel)
    async def _unknown_channel(_, exc):
        return JSONResponse(status_code=404,
                            content={"error": "UnknownChannel", "id": str(exc)})

    @app.post("/recordings", status_code=202)
    async def post_recording(request: Request):
        form = await request.form()
        papers = []
        total_bytes = 0
        for upload in form.getlist("pdf"):
            if hasattr(upload, "read"):
                blob = await upload.read()
                total_bytes += len(blob)
                if total_bytes > upload_limit:
                    return JSONResponse(status_code=413,
                                        content={"error": "UploadTooLarge",
                                                 "limit_bytes": upload_limit})
                papers.append((getattr(upload, "filename", "paper.pdf"), blob))
        try:
            minutes = int(str(form.get("minutes", "")))
        except ValueError:
            raise ValidationFailed("minutes", "must be an integer")
        keywords = [k.strip() for k in str(form.get("keywords", "")).split(",")
                    if k.strip()]
        req = RecordingRequest(
            title=str(form.get("title", "")),
            minutes=minutes,
            language=str(form.get("language", "")),
            model_id=str(form.get("model", "")),
            papers=papers,
            channel_id=str(form.get("channel", "default")) or "default",
            description=str(form.get("description", "")),
            keywords=keywords,
            cover_image_url=str(form.get("cover_image_url", "")),
        )
        episode = store.create_episode(req)
        return episode.to_dict()

    @app.get("/episodes")
    def list_episodes():
        return [e.to_dict() for e in store.list_episodes()]

    @app.get("/episodes/{episode_id}")
    def get_episode(episode_id: str):
        return store.get_episode(episode_id).to_dict()

    @app.get("/episodes/{episode_id}/audio")
    def get_audio(episode_id: str, request: Request):
        episode = store.get_episode(episode_id)
        if episode.status != "complete":
            return JSONResponse(
                status_code=409,
                content={"error": "AudioNotReady", "status": episode.status},
            )
        blob = store.get_blob(episode.audio_ref)
        return _serve_with_ranges(blob, request.headers.get("range"))

    @app.get("/channels")
    def list_channels():
        return [
            {"id": c.id, "display_name": c.display_name,
             "episode_ids": list(c.episode_ids)}
            for c in store.list_channels()
        ]

    @app.get("/channels/{channel_id}/episodes")
    def channel_episodes(channel_id: str):
        return [e.to_dict() for e in store.list_episodes(channel_id)]

    return app


def _serve_with_ranges(blob: bytes, range_header: str | None) -> Response:
    headers = {"Accept-Ranges": "bytes"}
    if not range_header:
        return Response(blob, media_type="audio/wav", headers=headers)
    spec = range_header.strip().lower()
    if not spec.startswith("bytes="):
        return Response(blob, media_type="audio/wav", headers=headers)
    start_s, _, end_s = spec[len("bytes="):].partition("-")
    try:
        if start_s:
            start = int(start_s)
            end = int(end_s) if end_s else len(blob) - 1
        else:  # suffix form: bytes=-N
            start = len(blob) - int(end_s)
            end = len(blob) - 1
    except ValueError:
        return Response(status_code=416, headers=headers)
    start = max(0, start)
    end = min(end, len(blob) - 1)
    if start > end or start >= len(blob):
        return Response(
            status_code=416,
            headers={**headers, "Content-Range": f"bytes */{len(blob)}"},
        )
    body = blob[start:end + 1]
    return Response(
        body,
        status_code=206,
        media_type="audio/wav",
        headers={
            **headers,
            "Content-Range": f"bytes {start}-{end}/{len(blob)}",
            "Content-Length": str(len(body)),
        },
    )
