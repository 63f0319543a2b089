"""Episode persistence: canonical JSON documents plus content-addressed
audio/PDF blobs on the local filesystem.

Document layout under the store root:
    episodes/<id>.json   canonical episode metadata (fixed key order below)
    content/<sha256>     blobs (uploaded PDFs, mastered audio)

Writes are serialized by a store-wide lock; episode ids embed a
nanosecond timestamp so (created_at, id) gives a stable newest-first order.
"""

from __future__ import annotations

import json
import secrets
import threading
import time
from dataclasses import dataclass, replace
from datetime import datetime, timezone
from pathlib import Path

from .errors import IllegalTransition, UnknownChannel, UnknownEpisode
from .options import RecordingRequest, validate_recording_request
import hashlib

STATUSES = ("pending", "recording", "complete", "failed")
_LEGAL_EDGES = {
    "pending": {"recording"},
    "recording": {"complete", "failed"},
    "complete": set(),
    "failed": set(),
}

# canonical serialization order; changing it breaks the wire format
EPISODE_FIELDS = (
    "id", "title", "status", "created_at", "duration_sec", "language",
    "model_id", "channel_id", "description", "keywords", "cover_image_url",
    "source_papers", "audio_ref", "failure_reason",
)


@dataclass(frozen=True)
class Episode:
    id: str
    title: str
    status: str
    created_at: str  # ISO 8601 UTC
    duration_sec: float
    language: str
    model_id: str
    channel_id: str
    description: str = ""
    keywords: tuple[str, ...] = ()
    cover_image_url: str = ""
    source_papers: tuple[tuple[str, str], ...] = ()  # (filename, sha256)
    audio_ref: str = ""
    failure_reason: str = ""

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "title": self.title,
            "status": self.status,
            "created_at": self.created_at,
            "duration_sec": self.duration_sec,
            "language": self.language,
            "model_id": self.model_id,
            "channel_id": self.channel_id,
            "description": self.description,
            "keywords": list(self.keywords),
            "cover_image_url": self.cover_image_url,
            "source_papers": [list(p) for p in self.source_papers],
            "audio_ref": self.audio_ref,
            "failure_reason": self.failure_reason,
        }

    @classmethod
    def from_dict(cls, obj: dict) -> "Episode":
        return cls(
            id=obj["id"],
            title=obj["title"],
            status=obj["status"],
            created_at=obj["created_at"],
            duration_sec=obj["duration_sec"],
            language=obj["language"],
            model_id=obj["model_id"],
            channel_id=obj["channel_id"],
            description=obj.get("description", ""),
            keywords=tuple(obj.get("keywords", ())),
            cover_image_url=obj.get("cover_image_url", ""),
            source_papers=tuple(
                (p[0], p[1]) for p in obj.get("source_papers", ())
            ),
            audio_ref=obj.get("audio_ref", ""),
            failure_reason=obj.get("failure_reason", ""),
        )


@dataclass(frozen=True)
class Channel:
    id: str
    display_name: str
    episode_ids: tuple[str, ...]


def canonical_json(episode: Episode) -> bytes:
    """Fixed-order, UTF-8, 2-space-indented document; the round-trip
    identity the wire-format tests assert."""
    obj = episode.to_dict()
    ordered = {key: obj[key] for key in EPISODE_FIELDS}
    return (json.dumps(ordered, ensure_ascii=False, indent=2) + "\n").encode("utf-8")


class EpisodeStore:
    """Single-node embedded store; safe for concurrent handler/worker use."""

    def __init__(self, root: str | Path):
        self.root = Path(root)
        (self.root / "episodes").mkdir(parents=True, exist_ok=True)
        (self.root / "content").mkdir(parents=True, exist_ok=True)
        self._lock = threading.RLock()

    # -- blobs -------------------------------------------------------------

    def put_blob(self, data: bytes) -> str:
        """Content-addressed write; returns the storage key."""
        digest = hashlib.sha256(data).hexdigest()
        path = self.root / "content" / digest
        if not path.exists():
            tmp = path.with_name(f".{digest}.{secrets.token_hex(4)}")
            tmp.write_bytes(data)
            tmp.replace(path)
        return digest

    def blob_path(self, key: str) -> Path:
        path = self.root / "content" / key
        if not path.exists():
            raise KeyError(key)
        return path

    def get_blob(self, key: str) -> bytes:
        return self.blob_path(key).read_bytes()

    # -- episodes ----------------------------------------------------------

    def _episode_path(self, episode_id: str) -> Path:
        return self.root / "episodes" / f"{episode_id}.json"

    def _write(self, episode: Episode) -> None:
        path = self._episode_path(episode.id)
        tmp = path.with_suffix(".json.tmp")
        tmp.write_bytes(canonical_json(episode))
        tmp.replace(path)

    def create_episode(self, request: RecordingRequest) -> Episode:
        validate_recording_request(request)
        with self._lock:
            papers = tuple(
                (filename, self.put_blob(blob)) for filename, blob in request.papers
            )
            episode = Episode(
                id=f"{time.time_ns():016x}-{secrets.token_hex(4)}",
                title=request.title,
                status="pending",
                created_at=datetime.now(timezone.utc).isoformat(),
                duration_sec=0.0,
                language=request.language,
                model_id=request.model_id,
                channel_id=request.channel_id,
                description=request.description,
                keywords=tuple(request.keywords),
                cover_image_url=request.cover_image_url,
                source_papers=papers,
            )
            self._write(episode)
            request_doc = {
                "minutes": request.minutes,
                "title": request.title,
                "language": request.language,
                "model_id": request.model_id,
                "channel_id": request.channel_id,
            }
            path = self._episode_path(episode.id).with_suffix(".request.json")
            path.write_text(json.dumps(request_doc, ensure_ascii=False), "utf-8")
            return episode

    def get_request(self, episode_id: str) -> dict:
        """The original recording options (sidecar document)."""
        path = self._episode_path(episode_id).with_suffix(".request.json")
        if not path.exists():
            raise UnknownEpisode(episode_id)
        return json.loads(path.read_text("utf-8"))

    def put_script(self, episode_id: str, script_doc: dict) -> None:
        path = self._episode_path(episode_id).with_suffix(".script.json")
        path.write_text(json.dumps(script_doc, ensure_ascii=False, indent=2),
                        "utf-8")

    def get_script(self, episode_id: str) -> dict:
        path = self._episode_path(episode_id).with_suffix(".script.json")
        if not path.exists():
            raise UnknownEpisode(episode_id)
        return json.loads(path.read_text("utf-8"))

    def get_episode(self, episode_id: str) -> Episode:
        path = self._episode_path(episode_id)
        if not path.exists():
            raise UnknownEpisode(episode_id)
        return Episode.from_dict(json.loads(path.read_text("utf-8")))

    def transition(self, episode_id: str, new_status: str,
                   payload: dict | None = None) -> Episode:
        payload = payload or {}
        with self._lock:
            episode = self.get_episode(episode_id)
            if new_status not in _LEGAL_EDGES.get(episode.status, set()):
                raise IllegalTransition(
                    f"{episode.status} -> {new_status} is not allowed"
                )
            updates: dict = {"status": new_status}
            if new_status == "complete":
                audio_ref = payload.get("audio_ref", "")
                duration = payload.get("duration_sec", 0.0)
                if not audio_ref or not duration or duration <= 0:
                    raise IllegalTransition(
                        "complete requires audio_ref and positive duration_sec"
                    )
                updates["audio_ref"] = audio_ref
                updates["duration_sec"] = float(duration)
            elif new_status == "failed":
                reason = payload.get("failure_reason", "")
                if not reason:
                    raise IllegalTransition("failed requires failure_reason")
                updates["failure_reason"] = reason
            episode = replace(episode, **updates)
            self._write(episode)
            return episode

    def list_episodes(self, channel_id: str | None = None) -> list[Episode]:
        """Newest first; unknown channel ids raise."""
        episodes = []
        for path in (self.root / "episodes").glob("*.json"):
            if path.name.endswith((".request.json", ".script.json")):
                continue
            episodes.append(Episode.from_dict(json.loads(path.read_text("utf-8"))))
        episodes.sort(key=lambda e: (e.created_at, e.id), reverse=True)
        if channel_id is None:
            return episodes
        selected = [e for e in episodes if e.channel_id == channel_id]
        if not selected:
            raise UnknownChannel(channel_id)
        return selected

    def list_channels(self) -> list[Channel]:
        by_channel: dict[str, list[str]] = {}
        for episode in self.list_episodes():
            by_channel.setdefault(episode.channel_id, []).append(episode.id)
        return [
            Channel(id=cid, display_name=cid, episode_ids=tuple(ids))
            for cid, ids in sorted(by_channel.items())
        ]

    # -- job claiming ------------------------------------------------------

    def claim_pending(self) -> Episode | None:
        """Atomically move the oldest pending episode to recording."""
        with self._lock:
            pending = [e for e in self.list_episodes() if e.status == "pending"]
            if not pending:
                return None
            oldest = pending[-1]
            return self.transition(oldest.id, "recording")

    def recover_interrupted(self) -> list[Episode]:
        """Startup sweep: recording episodes were orphaned by a crash."""
        with self._lock:
            return [
                self.transition(e.id, "failed", {"failure_reason": "interrupted"})
                for e in self.list_episodes()
                if e.status == "recording"
            ]
