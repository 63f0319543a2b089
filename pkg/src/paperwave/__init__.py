"""paperwave: adapt research-paper PDFs into conversational podcast episodes."""

__version__ = "0.1.0"

from .audio import AudioClip, MixSpec, assemble_episode, encode_master
from .ingest import DocumentText, SourceBundle, chunk_bundle, extract_text
from .orchestrator import PaperInfo, Script, Turn
from .planner import (
    ChapterPlan,
    TurnBudget,
    repair_chapter_plan,
    turns_for_duration,
    validate_chapter_plan,
)
from .providers import ProviderConfig
from .store import Channel, Episode, EpisodeStore

__all__ = [
    "AudioClip", "MixSpec", "assemble_episode", "encode_master",
    "DocumentText", "SourceBundle", "chunk_bundle", "extract_text",
    "PaperInfo", "Script", "Turn",
    "ChapterPlan", "TurnBudget", "repair_chapter_plan",
    "turns_for_duration", "validate_chapter_plan",
    "ProviderConfig", "Channel", "Episode", "EpisodeStore",
]
