"""LLM and TTS provider interfaces: HTTP clients plus deterministic
offline stand-ins used by --offline runs and the test suite."""

from __future__ import annotations

import json
import os
import re
from dataclasses import dataclass, field
from typing import Protocol

import httpx

from .audio import AudioClip, decode_wav, silence
from .errors import ProviderUnreachable, SynthesisRejected

HOST = "Host"
GUEST = "Guest"

MOCK_WORDS_PER_SECOND = 2.5
MOCK_TURN_WORDS = 45  # 45 words / 2.5 wps = 18 s, matching the default turn length


@dataclass(frozen=True)
class ProviderConfig:
    llm_endpoint: str = "offline:llm"
    model_id: str = "mock"
    tts_endpoint: str = "offline:tts"
    voice_map: dict = field(
        default_factory=lambda: {HOST: "radioHostVoice", GUEST: "guestVoice"}
    )
    max_retries: int = 2
    timeout: float = 60.0
    credential_env: str = "PAPERWAVE_API_KEY"

    def __post_init__(self):
        if not 0 <= self.max_retries <= 5:
            raise ValueError("max_retries must be in [0, 5]")
        if HOST not in self.voice_map or GUEST not in self.voice_map:
            raise ValueError("voice_map must cover both Host and Guest")


class LLMProvider(Protocol):
    def complete(self, system: str, user: str) -> str: ...


class TTSProvider(Protocol):
    def synthesize(self, text: str, voice_id: str, language: str) -> AudioClip: ...


# --- HTTP clients ---------------------------------------------------------


class HttpLLMProvider:
    """Chat-completion style endpoint: POST {model, messages} -> text."""

    def __init__(self, cfg: ProviderConfig):
        self.cfg = cfg

    def complete(self, system: str, user: str) -> str:
        headers = {}
        key = os.environ.get(self.cfg.credential_env, "")
        if key:
            headers["Authorization"] = f"Bearer {key}"
        payload = {
            "model": self.cfg.model_id,
            "messages": [
                {"role": "system", "content": system},
                {"role": "user", "content": user},
            ],
        }
        try:
            resp = httpx.post(
                self.cfg.llm_endpoint, json=payload, headers=headers,
                timeout=self.cfg.timeout,
            )
            resp.raise_for_status()
            body = resp.json()
        except httpx.HTTPError as exc:
            raise ProviderUnreachable(f"LLM endpoint failed: {exc}") from exc
        try:
            return body["choices"][0]["message"]["content"]
        except (KeyError, IndexError, TypeError) as exc:
            raise ProviderUnreachable(f"unexpected LLM response shape: {body!r}") from exc


class HttpTTSProvider:
    """POST {text, voice, language} -> WAV bytes."""

    def __init__(self, cfg: ProviderConfig):
        self.cfg = cfg

    def synthesize(self, text: str, voice_id: str, language: str) -> AudioClip:
        if not text.strip():
            raise SynthesisRejected("empty text")
        headers = {}
        key = os.environ.get(self.cfg.credential_env, "")
        if key:
            headers["Authorization"] = f"Bearer {key}"
        try:
            resp = httpx.post(
                self.cfg.tts_endpoint,
                json={"text": text, "voice": voice_id, "language": language},
                headers=headers,
                timeout=self.cfg.timeout,
            )
            resp.raise_for_status()
        except httpx.HTTPError as exc:
            raise ProviderUnreachable(f"TTS endpoint failed: {exc}") from exc
        if resp.status_code == 422:
            raise SynthesisRejected(resp.text)
        return decode_wav(resp.content)


# --- offline stand-ins ----------------------------------------------------


_FILLER = {
    "en": ("the paper explains this point in detail and the host restates it "
           "for the audience so every listener can follow the argument").split(),
    "ja": "論文 の 内容 を わかりやすく 説明 し ます".split(),
    "ko": "논문 의 내용 을 알기 쉽게 설명 합니다".split(),
}


class OfflineLLMProvider:
    """Deterministic local assistant: answers the three prompt shapes with
    valid JSON derived from the prompt text itself. Records every call."""

    def __init__(self):
        self.calls: list[tuple[str, str]] = []

    def complete(self, system: str, user: str) -> str:
        self.calls.append((system, user))
        if "information retrieval AI" in system:
            return self._info(user)
        if "radio program editor" in system:
            return self._program(user)
        if "script writer" in system:
            return self._script(user)
        raise ProviderUnreachable("offline provider: unrecognized prompt")

    @staticmethod
    def _excerpt_lines(user: str) -> list[str]:
        m = re.search(r"# Paper excerpts\n", user)
        if not m:
            return []
        body = user[m.end():]
        lines = [ln.strip() for ln in body.splitlines()
                 if ln.strip() and not ln.startswith("[excerpt ")]
        return lines

    def _info(self, user: str) -> str:
        lines = self._excerpt_lines(user)
        title = lines[0] if lines else "Untitled Paper"
        authors = []
        if len(lines) > 1:
            authors = [a.strip() for a in re.split(r",| and ", lines[1]) if a.strip()]
            # author lines are short name lists, not prose
            if len(authors) > 8 or any(len(a.split()) > 4 for a in authors):
                authors = []
        if not authors:
            authors = ["Unknown Author"]
        return json.dumps({"title": title, "authors": authors})

    def _program(self, user: str) -> str:
        m = re.search(r"number of turns\): (\d+)", user)
        total = int(m.group(1)) if m else 16
        headings = re.findall(r"^- (.+)$", user.split("# Paper excerpts")[0], re.M)
        headings = [h for h in headings if h != "(none detected)"]
        # pick a chapter count that admits 8..12 turns each, then split evenly
        count = max(1, min((total + 9) // 10, total // 8))
        base, extra = divmod(total, count)
        turns = [base + (1 if i < extra else 0) for i in range(count)]
        chapters = []
        for i in range(count):
            title = headings[i] if i < len(headings) else f"Part {i + 1}"
            chapters.append({
                "title": title,
                "summary": f"This chapter covers {title} as presented in the paper.",
                "turns": turns[i],
            })
        return json.dumps({"chapters": chapters})

    def _script(self, user: str) -> str:
        m = re.search(r"Number of turns: (\d+)", user)
        count = int(m.group(1)) if m else 8
        chapter_m = re.search(r"# Chapter \d+ of \d+: (.+)", user)
        topic = chapter_m.group(1) if chapter_m else "the paper"
        language = "en"
        for code, instruction in (("ja", "Japanese"), ("ko", "Korean")):
            if f"in {instruction}" in user:
                language = code
        filler = _FILLER[language]
        turns = []
        for i in range(count):
            speaker = HOST if i % 2 == 0 else GUEST
            seed = f"Turn {i + 1} about {topic}:".replace("\n", " ").split()
            words = seed + [filler[j % len(filler)] for j in range(MOCK_TURN_WORDS)]
            # exactly MOCK_TURN_WORDS words so the mock TTS hits 18 s per turn
            turns.append({"speaker": speaker,
                          "text": " ".join(words[:MOCK_TURN_WORDS])})
        return json.dumps({"turns": turns})


class ScriptedLLMProvider:
    """Replays a fixed list of responses; raising entries inject faults."""

    def __init__(self, responses: list):
        self._responses = list(responses)
        self.calls: list[tuple[str, str]] = []

    def complete(self, system: str, user: str) -> str:
        self.calls.append((system, user))
        if not self._responses:
            raise ProviderUnreachable("scripted provider ran out of responses")
        item = self._responses.pop(0)
        if isinstance(item, Exception):
            raise item
        return item


class MockTTSProvider:
    """Deterministic TTS: a silence clip of word_count / 2.5 seconds."""

    def __init__(self, sample_rate: int = 44100):
        self.sample_rate = sample_rate
        self.requests: list[tuple[str, str, str]] = []

    def synthesize(self, text: str, voice_id: str, language: str) -> AudioClip:
        if not text.strip():
            raise SynthesisRejected("empty text")
        self.requests.append((text, voice_id, language))
        seconds = len(text.split()) / MOCK_WORDS_PER_SECOND
        return silence(seconds, self.sample_rate, channels=1)
