"""Prompt templates for the three assistants.

The constraint blocks are fixed strings; rendered prompts embed them
byte-for-byte (golden-tested) plus machine-readable parameter lines that
the offline provider can parse back out.
"""

from __future__ import annotations

from .ingest import Chunk
from .planner import ChapterPlan, TurnBudget

LANGUAGE_NAMES = {"en": "English", "ja": "Japanese", "ko": "Korean"}

LANGUAGE_INSTRUCTIONS = {
    "en": "Write all dialogue in English.",
    "ja": "Write all dialogue in Japanese (日本語).",
    "ko": "Write all dialogue in Korean (한국어).",
}

INFO_EXTRACTOR_SYSTEM = """\
# Objective
You are an information retrieval AI. Extract information specified by the user from a PDF academic paper and return the result in json format.
# Input
Keywords of information to be searched.
# Output
Extract information related to the input keywords.
Output in json format; no text other than json is output.
Do not output any text other than json."""

PROGRAM_WRITER_SYSTEM = """\
Think slowly and carefully.
# Objective
You are a radio program editor of an educational program, and you are considering a chapter for a program that expertly explains the content of a PDF academic article.
# Input
Length of the program (number of turns)
# Output
Output the chapters of a radio program; devise chapters to reflect the sections of the PDF article and output the title and content of each chapter.
## Requirements for output
- The chapter titles should be related with the section titles of the paper.
- Chapter titles should be output in English.
- A chapter should contain at least 8 turns.
- If the number of turns is less than 8, the chapter should be merged with other chapters.
- A chapter should contain a maximum of 12 turns.
- Output in JSON format."""

SCRIPT_WRITER_SYSTEM = """\
Think slowly and carefully.
# Objective
You are a script writer of an educational program, and you write a script for a episode that expertly explains the content of a PDF academic article.
# Personality settings
- A professional radio personality.
- Acts as a listener role that makes the author feel comfortable talking.
- Reacts to the conversation to make it natural.
- Rephrases the author's statements to emphasize the content.
- Gentle and polite tone, explains technical terms in an easy-to-understand way.
- Clear and logical tone. Leads the discussion while making it easy for listeners to understand.
# Researcher settings
- The researcher is an expert who explains the content of the paper in an easy-to-understand way.
# Characteristics of desirable programs
- Covering the details of the paper
- Explaining technical terms in detail, including academic definitions
- Accurately reflecting the content of the paper
# Characteristics of inappropriate programmes
- Omitting content from the paper
- Including content that could be misleading
- Include topics unrelated to the content of the paper
- Use technical terms without explanations
- Host do not properly cite the statements of researchers
- Include content unrelated to the paper, such as commercials and previews of upcoming programmes
- Include information not included in the paper, such as personal episodes of researchers"""


def _excerpt_block(chunks: list[Chunk]) -> str:
    parts = [f"[excerpt {c.chunk_id}]\n{c.text}" for c in chunks]
    return "# Paper excerpts\n" + "\n\n".join(parts)


def info_extractor_user(chunks: list[Chunk]) -> str:
    return (
        "Keywords: title, authors\n"
        'Return JSON of the form {"title": string, "authors": [string, ...]}.\n\n'
        + _excerpt_block(chunks)
    )


def program_writer_user(
    budget: TurnBudget, chunks: list[Chunk], heading_lines: list[str]
) -> str:
    headings = "\n".join(f"- {h}" for h in heading_lines) or "- (none detected)"
    return (
        f"Length of the program (number of turns): {budget.total_turns}\n"
        'Return JSON of the form {"chapters": [{"title": string, '
        '"summary": string, "turns": integer}, ...]}.\n'
        f"# Section titles detected in the paper\n{headings}\n\n"
        + _excerpt_block(chunks)
    )


def script_writer_user(
    plan: ChapterPlan,
    chapter_index: int,
    paper_title: str,
    authors: list[str],
    language: str,
    chunks: list[Chunk],
) -> str:
    chapter = plan.chapters[chapter_index]
    lines = [
        "# Participants of the program",
        "radioHostVoice (voice: radioHostVoice): Host",
        f"{', '.join(authors)} (voice: guestVoice): Researcher",
        f"# Paper\n{paper_title}",
        f"# Chapter {chapter_index + 1} of {len(plan.chapters)}: {chapter.title}",
        f"Chapter summary: {chapter.summary}",
        f"Number of turns: {chapter.turns}",
        f"# Language\n{LANGUAGE_INSTRUCTIONS[language]}",
        'Return JSON of the form {"turns": [{"speaker": "Host" | "Guest", '
        '"text": string}, ...]} with exactly the requested number of turns.',
    ]
    if chapter_index == 0:
        outline = "\n".join(
            f"{i + 1}. {c.title}" for i, c in enumerate(plan.chapters)
        )
        lines.insert(
            0,
            "# Episode outline\n"
            "The episode opens with the Host presenting this outline of the "
            f"whole program before the first topic:\n{outline}",
        )
    lines.append(_excerpt_block(chunks))
    return "\n".join(lines)


def episode_outline_text(plan: ChapterPlan) -> str:
    return "\n".join(f"{i + 1}. {c.title}" for i, c in enumerate(plan.chapters))
