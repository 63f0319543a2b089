"""Three-assistant orchestration: info extraction, program planning, and
per-chapter script writing, with JSON-schema validation and bounded
repair retries around every provider call."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass

import jsonschema

from . import planner, prompts
from .errors import (
    ChapterCountMismatch,
    FirstSpeakerNotHost,
    SchemaRepairExhausted,
    TurnCountMismatch,
)
from .ingest import Chunk, SourceBundle
from .planner import Chapter, ChapterPlan, TurnBudget
from .providers import GUEST, HOST, LLMProvider, ProviderConfig

SUPPORTED_LANGUAGES = ("en", "ja", "ko")

_CONTROL_CHARS = re.compile(r"[\x00-\x08\x0b-\x1f\x7f]")


@dataclass(frozen=True)
class PaperInfo:
    title: str
    authors: tuple[str, ...]
    extraction_failed: bool = False

    def __post_init__(self):
        if not self.title:
            raise ValueError("title must be non-empty")
        if not self.authors:
            raise ValueError("authors must be non-empty")


@dataclass(frozen=True)
class Turn:
    speaker: str  # Host | Guest
    text: str
    chapter_index: int = 0

    def __post_init__(self):
        if self.speaker not in (HOST, GUEST):
            raise ValueError(f"unknown speaker {self.speaker!r}")
        if not self.text:
            raise ValueError("turn text must be non-empty")
        if _CONTROL_CHARS.search(self.text):
            raise ValueError("turn text contains control characters")


@dataclass(frozen=True)
class Script:
    turns: tuple[Turn, ...]
    plan: ChapterPlan
    info: PaperInfo
    language: str

    def __post_init__(self):
        if self.language not in SUPPORTED_LANGUAGES:
            raise ValueError(f"unsupported language {self.language!r}")


@dataclass
class CallReport:
    """Mutable per-call accounting the caller can inspect after a call."""

    attempts: int = 0

    @property
    def retry_count(self) -> int:
        return max(0, self.attempts - 1)


INFO_SCHEMA = {
    "type": "object",
    "required": ["title", "authors"],
    "properties": {
        "title": {"type": "string", "minLength": 1},
        "authors": {
            "type": "array", "minItems": 1,
            "items": {"type": "string", "minLength": 1},
        },
    },
}

PROGRAM_SCHEMA = {
    "type": "object",
    "required": ["chapters"],
    "properties": {
        "chapters": {
            "type": "array", "minItems": 1,
            "items": {
                "type": "object",
                "required": ["title", "summary", "turns"],
                "properties": {
                    "title": {"type": "string", "minLength": 1},
                    "summary": {"type": "string"},
                    "turns": {"type": "integer", "minimum": 1},
                },
            },
        },
    },
}

SCRIPT_SCHEMA = {
    "type": "object",
    "required": ["turns"],
    "properties": {
        "turns": {
            "type": "array", "minItems": 1,
            "items": {
                "type": "object",
                "required": ["speaker", "text"],
                "properties": {
                    "speaker": {"enum": [HOST, GUEST]},
                    "text": {"type": "string", "minLength": 1},
                },
            },
        },
    },
}


def _extract_json(raw: str) -> dict:
    try:
        return json.loads(raw)
    except json.JSONDecodeError:
        pass
    start = raw.find("{")
    end = raw.rfind("}")
    if start < 0 or end <= start:
        raise ValueError("no JSON object found in output")
    return json.loads(raw[start:end + 1])


def _structured_call(
    llm: LLMProvider,
    system: str,
    user: str,
    schema: dict,
    max_retries: int,
    report: CallReport | None = None,
    extra_check=None,
) -> dict:
    """Call the provider until its output parses and validates; at most
    1 + max_retries attempts, then SchemaRepairExhausted."""
    report = report if report is not None else CallReport()
    message = user
    last_raw = ""
    last_error = ""
    for _ in range(max_retries + 1):
        report.attempts += 1
        last_raw = llm.complete(system, message)
        try:
            obj = _extract_json(last_raw)
            jsonschema.validate(obj, schema)
            if extra_check is not None:
                extra_check(obj)
            return obj
        except (ValueError, jsonschema.ValidationError) as exc:
            last_error = str(exc).splitlines()[0]
            message = (
                user
                + "\n\nYour previous output was invalid: "
                + last_error
                + "\nReturn only valid JSON matching the requested schema."
            )
    raise SchemaRepairExhausted(
        f"output never validated after {report.attempts} attempts: {last_error}",
        last_output=last_raw,
        attempts=report.attempts,
    )


# --- chunk selection ------------------------------------------------------


def _front_chunks(bundle: SourceBundle, count: int = 3) -> list[Chunk]:
    return list(bundle.chunks[:count])


def _heading_chunks(bundle: SourceBundle, count: int = 6) -> list[Chunk]:
    headings = bundle.heading_lines
    scored = [c for c in bundle.chunks if any(h in c.text for h in headings)]
    picked = list(dict.fromkeys(list(bundle.chunks[:2]) + scored))
    return picked[:count]

_WORD_RE = re.compile(r"[A-Za-z]{3,}")


def _relevant_chunks(bundle: SourceBundle, query: str, count: int = 4) -> list[Chunk]:
    """Keyword-overlap selection between the query and each chunk."""
    terms = {w.lower() for w in _WORD_RE.findall(query)}
    if not terms:
        return _front_chunks(bundle, count)
    scored = sorted(
        bundle.chunks,
        key=lambda c: (-len(terms & {w.lower() for w in _WORD_RE.findall(c.text)}),
                       c.chunk_id),
    )
    return list(scored[:count])


# --- assistant operations -------------------------------------------------


def extract_info(
    bundle: SourceBundle, cfg: ProviderConfig, llm: LLMProvider,
    report: CallReport | None = None,
) -> PaperInfo:
    if not bundle.chunks:
        raise ValueError("bundle has no chunks")
    obj = _structured_call(
        llm,
        prompts.INFO_EXTRACTOR_SYSTEM,
        prompts.info_extractor_user(_front_chunks(bundle)),
        INFO_SCHEMA,
        cfg.max_retries,
        report,
    )
    return PaperInfo(title=obj["title"], authors=tuple(obj["authors"]))


def write_program(
    bundle: SourceBundle, budget: TurnBudget, cfg: ProviderConfig,
    llm: LLMProvider, report: CallReport | None = None,
) -> ChapterPlan:
    obj = _structured_call(
        llm,
        prompts.PROGRAM_WRITER_SYSTEM,
        prompts.program_writer_user(budget, _heading_chunks(bundle),
                                    bundle.heading_lines),
        PROGRAM_SCHEMA,
        cfg.max_retries,
        report,
    )
    plan = ChapterPlan(
        chapters=tuple(
            Chapter(title=c["title"], summary=c["summary"], turns=c["turns"])
            for c in obj["chapters"]
        ),
        language_of_titles="en",
    )
    return planner.repair_chapter_plan(plan, budget)


def write_chapter_script(
    bundle: SourceBundle,
    plan: ChapterPlan,
    chapter_index: int,
    info: PaperInfo,
    language: str,
    cfg: ProviderConfig,
    llm: LLMProvider,
    report: CallReport | None = None,
) -> list[Turn]:
    if not 0 <= chapter_index < len(plan.chapters):
        raise ValueError("chapter_index out of range")
    chapter = plan.chapters[chapter_index]
    expected = chapter.turns

    def check_count(obj: dict) -> None:
        if len(obj["turns"]) != expected:
            raise ValueError(
                f"expected exactly {expected} turns, got {len(obj['turns'])}"
            )

    user = prompts.script_writer_user(
        plan, chapter_index, info.title, list(info.authors), language,
        _relevant_chunks(bundle, chapter.title + " " + chapter.summary),
    )
    try:
        obj = _structured_call(
            llm, prompts.SCRIPT_WRITER_SYSTEM, user, SCRIPT_SCHEMA,
            cfg.max_retries, report, extra_check=check_count,
        )
    except SchemaRepairExhausted as exc:
        if "expected exactly" in str(exc):
            raise TurnCountMismatch(str(exc)) from exc
        raise
    return [
        Turn(
            speaker=t["speaker"],
            text=_CONTROL_CHARS.sub(" ", t["text"]).strip() or " ",
            chapter_index=chapter_index,
        )
        for t in obj["turns"]
    ]


def assemble_script(
    per_chapter: list[list[Turn]],
    plan: ChapterPlan,
    info: PaperInfo,
    language: str,
) -> Script:
    if len(per_chapter) != len(plan.chapters):
        raise ChapterCountMismatch(
            f"{len(per_chapter)} turn lists for {len(plan.chapters)} chapters"
        )
    for i, (turns, chapter) in enumerate(zip(per_chapter, plan.chapters)):
        if len(turns) != chapter.turns:
            raise ChapterCountMismatch(
                f"chapter {i}: {len(turns)} turns, plan says {chapter.turns}"
            )
    flat = [
        Turn(speaker=t.speaker, text=t.text, chapter_index=i)
        for i, turns in enumerate(per_chapter)
        for t in turns
    ]
    if flat[0].speaker != HOST:
        raise FirstSpeakerNotHost("the episode must open with the Host")
    return Script(turns=tuple(flat), plan=plan, info=info, language=language)
