"""End-to-end episode generation: ingest -> plan -> orchestrate -> audio.

The same pipeline backs the CLI `record` command (inline) and the service
job runner. Stage timings are emitted as one JSON log line per stage.
"""

from __future__ import annotations

import json
import logging
import time
from dataclasses import dataclass, field
from pathlib import Path

from . import audio, ingest, orchestrator, planner
from .audio import AudioClip, MixSpec
from .orchestrator import Script
from .providers import (
    LLMProvider,
    HttpLLMProvider,
    HttpTTSProvider,
    MockTTSProvider,
    OfflineLLMProvider,
    ProviderConfig,
    TTSProvider,
)
from .store import Episode, EpisodeStore

log = logging.getLogger("paperwave.pipeline")


@dataclass
class PipelineConfig:
    provider: ProviderConfig = field(default_factory=ProviderConfig)
    offline: bool = True
    seconds_per_turn: float = planner.DEFAULT_SECONDS_PER_TURN
    chunk_chars: int = ingest.DEFAULT_CHUNK_CHARS
    inter_turn_gap: float = 0.4
    bgm_gain_db: float = -18.0
    intro_lead: float = 2.0
    outro_fade: float = 3.0
    loudness_target_lufs: float = -16.0
    bgm_dir: str = ""


@dataclass(frozen=True)
class PipelineResult:
    script: Script
    master: AudioClip
    wav_bytes: bytes

    @property
    def duration_sec(self) -> float:
        return self.master.duration


def make_providers(cfg: PipelineConfig) -> tuple[LLMProvider, TTSProvider]:
    if cfg.offline:
        return OfflineLLMProvider(), MockTTSProvider()
    return HttpLLMProvider(cfg.provider), HttpTTSProvider(cfg.provider)


def pick_bgm(cfg: PipelineConfig, episode_id: str) -> AudioClip:
    """Rotate through the configured BGM directory; fall back to the
    built-in loop. Selection is deterministic per episode id."""
    if cfg.bgm_dir:
        tracks = sorted(Path(cfg.bgm_dir).glob("*.wav"))
        if tracks:
            index = int.from_bytes(episode_id.encode()[-4:], "big") % len(tracks)
            return audio.decode_wav(tracks[index].read_bytes())
    return audio.default_bgm()


def _log_stage(episode_id: str, stage: str, started: float) -> None:
    log.info(json.dumps({
        "episode_id": episode_id,
        "stage": stage,
        "elapsed_sec": round(time.monotonic() - started, 4),
    }))


def generate_episode(
    papers: list[tuple[str, bytes]],
    minutes: int,
    language: str,
    cfg: PipelineConfig,
    llm: LLMProvider | None = None,
    tts: TTSProvider | None = None,
    episode_id: str = "",
) -> PipelineResult:
    """Run the full adaptation for already-loaded PDF bytes."""
    if llm is None or tts is None:
        default_llm, default_tts = make_providers(cfg)
        llm = llm or default_llm
        tts = tts or default_tts

    t0 = time.monotonic()
    docs = [ingest.extract_text(blob, doc_id=name) for name, blob in papers]
    bundle = ingest.chunk_bundle(docs, cfg.chunk_chars)
    _log_stage(episode_id, "ingest", t0)

    t0 = time.monotonic()
    budget = planner.turns_for_duration(minutes, cfg.seconds_per_turn)
    info = orchestrator.extract_info(bundle, cfg.provider, llm)
    plan = orchestrator.write_program(bundle, budget, cfg.provider, llm)
    _log_stage(episode_id, "plan", t0)

    t0 = time.monotonic()
    per_chapter = [
        orchestrator.write_chapter_script(
            bundle, plan, i, info, language, cfg.provider, llm
        )
        for i in range(len(plan.chapters))
    ]
    script = orchestrator.assemble_script(per_chapter, plan, info, language)
    _log_stage(episode_id, "script", t0)

    t0 = time.monotonic()
    clips = [
        audio.synthesize_turn(turn, cfg.provider, tts, language)
        for turn in script.turns
    ]
    mix = MixSpec(
        bgm_clip=pick_bgm(cfg, episode_id),
        inter_turn_gap=cfg.inter_turn_gap,
        bgm_gain_db=cfg.bgm_gain_db,
        intro_lead=cfg.intro_lead,
        outro_fade=cfg.outro_fade,
        loudness_target_lufs=cfg.loudness_target_lufs,
    )
    master = audio.assemble_episode(clips, mix)
    wav = audio.encode_master(master, "wav_pcm16")
    _log_stage(episode_id, "audio", t0)

    return PipelineResult(script=script, master=master, wav_bytes=wav)


def run_episode_job(
    store: EpisodeStore,
    episode: Episode,
    cfg: PipelineConfig,
    llm: LLMProvider | None = None,
    tts: TTSProvider | None = None,
) -> Episode:
    """Execute the pipeline for a claimed (recording) episode and settle
    its status. Failures land in failure_reason, never propagate."""
    try:
        papers = [
            (filename, store.get_blob(key))
            for filename, key in episode.source_papers
        ]
        result = generate_episode(
            papers,
            minutes=int(store.get_request(episode.id)["minutes"]),
            language=episode.language,
            cfg=cfg,
            llm=llm,
            tts=tts,
            episode_id=episode.id,
        )
        audio_ref = store.put_blob(result.wav_bytes)
        store.put_script(episode.id, script_to_dict(result.script))
        log.info(json.dumps({"episode_id": episode.id, "stage": "stored"}))
        return store.transition(episode.id, "complete", {
            "audio_ref": audio_ref,
            "duration_sec": result.duration_sec,
        })
    except Exception as exc:  # noqa: BLE001 - every failure must settle the episode
        reason = f"{type(exc).__name__}: {exc}" if str(exc) else type(exc).__name__
        log.warning(json.dumps({
            "episode_id": episode.id, "stage": "failed", "reason": reason,
        }))
        return store.transition(episode.id, "failed", {"failure_reason": reason})


def script_to_dict(script: Script) -> dict:
    return {
        "language": script.language,
        "info": {"title": script.info.title, "authors": list(script.info.authors)},
        "plan": {
            "language_of_titles": script.plan.language_of_titles,
            "chapters": [
                {"title": c.title, "summary": c.summary, "turns": c.turns}
                for c in script.plan.chapters
            ],
        },
        "turns": [
            {"speaker": t.speaker, "text": t.text, "chapter_index": t.chapter_index}
            for t in script.turns
        ],
    }
