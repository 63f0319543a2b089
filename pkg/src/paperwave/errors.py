"""Exception hierarchy shared across the pipeline."""

from __future__ import annotations


class PaperwaveError(Exception):
    """Base class for all domain errors."""


# --- ingest ---------------------------------------------------------------


class MalformedPdf(PaperwaveError):
    """The input bytes are not a parseable PDF."""


class EncryptedPdf(PaperwaveError):
    """The PDF is password-protected; extraction is refused."""


class EmptyInput(PaperwaveError):
    """All supplied documents are empty."""


# --- planner --------------------------------------------------------------


class UnrepairablePlan(PaperwaveError):
    """No repair can satisfy the chapter turn constraints."""


# --- orchestrator ---------------------------------------------------------


class ProviderUnreachable(PaperwaveError):
    """The LLM or TTS endpoint could not be reached."""


class SchemaRepairExhausted(PaperwaveError):
    """Provider output never validated within the retry budget.

    Carries the last raw output for diagnostics.
    """

    def __init__(self, message: str, last_output: str = "", attempts: int = 0):
        super().__init__(message)
        self.last_output = last_output
        self.attempts = attempts


class TurnCountMismatch(PaperwaveError):
    """Provider returned the wrong number of turns after all retries."""


class ChapterCountMismatch(PaperwaveError):
    """Per-chapter turn lists do not line up with the plan."""


class FirstSpeakerNotHost(PaperwaveError):
    """Assembled scripts must open with the Host."""


# --- audio ----------------------------------------------------------------


class SynthesisRejected(PaperwaveError):
    """The TTS provider refused the text."""


class RateMismatch(PaperwaveError):
    """Clips must share the master sample rate before assembly."""


class EmptyClipList(PaperwaveError):
    """assemble_episode requires at least one clip."""


class EncoderUnavailable(PaperwaveError):
    """The requested output encoder is not configured."""


# --- store ----------------------------------------------------------------


class ValidationFailed(PaperwaveError):
    """A recording request failed validation; names the offending field."""

    def __init__(self, field: str, reason: str):
        super().__init__(f"{field}: {reason}")
        self.field = field
        self.reason = reason


class IllegalTransition(PaperwaveError):
    """The requested status change is not a legal lifecycle edge."""


class UnknownEpisode(PaperwaveError):
    """No episode with the given id."""


class UnknownChannel(PaperwaveError):
    """No channel with the given id."""
