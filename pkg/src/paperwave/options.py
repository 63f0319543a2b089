"""Recording options shared by the CLI and the HTTP service.

Both surfaces funnel through validate_recording_request so they accept
identical semantics.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import ValidationFailed

SUPPORTED_LANGUAGES = ("en", "ja", "ko")
MIN_MINUTES = 1
MAX_MINUTES = 120


@dataclass
class RecordingRequest:
    title: str
    minutes: int
    language: str
    model_id: str
    papers: list[tuple[str, bytes]] = field(default_factory=list)  # (filename, bytes)
    channel_id: str = "default"
    description: str = ""
    keywords: list[str] = field(default_factory=list)
    cover_image_url: str = ""


def validate_recording_request(req: RecordingRequest) -> None:
    """Raise ValidationFailed naming the first offending field."""
    if not req.title or not req.title.strip():
        raise ValidationFailed("title", "must be non-empty")
    if not isinstance(req.minutes, int) or not MIN_MINUTES <= req.minutes <= MAX_MINUTES:
        raise ValidationFailed(
            "minutes", f"must be an integer in [{MIN_MINUTES}, {MAX_MINUTES}]"
        )
    if req.language not in SUPPORTED_LANGUAGES:
        raise ValidationFailed(
            "language", f"must be one of {', '.join(SUPPORTED_LANGUAGES)}"
        )
    if not req.model_id or not req.model_id.strip():
        raise ValidationFailed("model_id", "must be non-empty")
    if not req.papers:
        raise ValidationFailed("source_papers", "at least one PDF is required")
    for filename, blob in req.papers:
        if not blob:
            raise ValidationFailed("source_papers", f"{filename} is empty")
