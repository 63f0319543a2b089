"""Turn budgeting and chapter-plan validation/repair.

Hard constraints: every chapter carries between MIN_TURNS and MAX_TURNS
turns, and chapter totals must match the episode's turn budget. A total n
is feasible iff it can be partitioned into parts within [8, 12]; the closed
form of that set is {0} | [8, 12] | [16, inf).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .errors import UnrepairablePlan

MIN_TURNS = 8
MAX_TURNS = 12
DEFAULT_SECONDS_PER_TURN = 18.0


@dataclass(frozen=True)
class TurnBudget:
    requested_minutes: int
    seconds_per_turn: float
    total_turns: int


@dataclass(frozen=True)
class Chapter:
    title: str
    summary: str
    turns: int


@dataclass(frozen=True)
class ChapterPlan:
    chapters: tuple[Chapter, ...]
    language_of_titles: str = "en"

    @property
    def total_turns(self) -> int:
        return sum(c.turns for c in self.chapters)


@dataclass(frozen=True)
class Violation:
    kind: str  # TurnsBelowMin | TurnsAboveMax | SumMismatch | EmptyTitle
    chapter_index: int | None = None
    expected: int | None = None
    actual: int | None = None


def is_feasible(total: int) -> bool:
    """True iff total splits into chapters of 8..12 turns (closed form)."""
    return total == 0 or MIN_TURNS <= total <= MAX_TURNS or total >= 2 * MIN_TURNS


def nearest_feasible(total: int) -> int:
    """Snap an infeasible positive total to the nearest feasible one.

    1..7 -> 8; 13, 14 -> 12; 15 -> 16.
    """
    if total >= 1 and is_feasible(total):
        return total
    if total < MIN_TURNS:
        return MIN_TURNS
    # gap between 12 and 16: 13, 14 snap down, 15 snaps up
    return MAX_TURNS if total - MAX_TURNS <= 2 else 2 * MIN_TURNS


def turns_for_duration(
    minutes: int, seconds_per_turn: float = DEFAULT_SECONDS_PER_TURN
) -> TurnBudget:
    """Convert a requested duration into a feasible turn budget."""
    if minutes < 1:
        raise ValueError("minutes must be >= 1")
    if not 5.0 <= seconds_per_turn <= 60.0:
        raise ValueError("seconds_per_turn must be in [5, 60]")
    raw = math.floor(minutes * 60.0 / seconds_per_turn + 0.5)
    return TurnBudget(
        requested_minutes=minutes,
        seconds_per_turn=seconds_per_turn,
        total_turns=nearest_feasible(raw),
    )


def validate_chapter_plan(plan: ChapterPlan, budget: TurnBudget) -> list[Violation]:
    violations: list[Violation] = []
    for i, chapter in enumerate(plan.chapters):
        if not chapter.title.strip():
            violations.append(Violation("EmptyTitle", chapter_index=i))
        if chapter.turns < MIN_TURNS:
            violations.append(Violation("TurnsBelowMin", chapter_index=i))
        elif chapter.turns > MAX_TURNS:
            violations.append(Violation("TurnsAboveMax", chapter_index=i))
    actual = plan.total_turns
    if actual != budget.total_turns:
        violations.append(
            Violation("SumMismatch", expected=budget.total_turns, actual=actual)
        )
    return violations


def repair_chapter_plan(plan: ChapterPlan, budget: TurnBudget) -> ChapterPlan:
    """Force a plan into compliance: chapter count clamped so every chapter
    can hold 8..12 turns, then turns redistributed to hit the budget total.

    Merging joins adjacent chapters (titles with " & ", summaries
    concatenated); splitting divides the largest chapter as evenly as
    possible. Redistribution between existing chapters is preferred over
    changing the chapter count.
    """
    total = budget.total_turns
    if not plan.chapters:
        raise UnrepairablePlan("plan has no chapters")
    if not is_feasible(total):
        raise UnrepairablePlan(f"budget total {total} is not partitionable into 8..12")

    chapters = list(plan.chapters)
    min_count = math.ceil(total / MAX_TURNS)
    max_count = total // MIN_TURNS

    # too many chapters: merge the adjacent pair with the fewest combined turns
    while len(chapters) > max_count:
        best = min(
            range(len(chapters) - 1),
            key=lambda i: chapters[i].turns + chapters[i + 1].turns,
        )
        left, right = chapters[best], chapters[best + 1]
        merged = Chapter(
            title=f"{left.title} & {right.title}",
            summary=(left.summary + " " + right.summary).strip(),
            turns=left.turns + right.turns,
        )
        chapters[best:best + 2] = [merged]

    # too few chapters: split the largest one in half
    while len(chapters) < min_count:
        best = max(range(len(chapters)), key=lambda i: chapters[i].turns)
        src = chapters[best]
        half = src.turns - src.turns // 2
        chapters[best:best + 1] = [
            replace(src, turns=half),
            Chapter(title=f"{src.title} (cont.)", summary=src.summary,
                    turns=src.turns - half),
        ]

    turns = _redistribute([c.turns for c in chapters], total)
    chapters = [replace(c, turns=t) for c, t in zip(chapters, turns)]
    return ChapterPlan(chapters=tuple(chapters),
                       language_of_titles=plan.language_of_titles)


def _redistribute(turns: list[int], total: int) -> list[int]:
    """Clamp each entry into [8, 12] then walk the remainder out one turn at
    a time, left to right. Requires len(turns)*8 <= total <= len(turns)*12."""
    turns = [min(MAX_TURNS, max(MIN_TURNS, t)) for t in turns]
    delta = total - sum(turns)
    step = 1 if delta > 0 else -1
    limit = MAX_TURNS if delta > 0 else MIN_TURNS
    i = 0
    while delta != 0:
        if turns[i % len(turns)] != limit:
            turns[i % len(turns)] += step
            delta -= step
        i += 1
    return turns


def brute_force_feasible(total: int) -> bool:
    """Independent oracle: exhaustive check that total has a [8,12] partition."""
    if total == 0:
        return True
    reachable = {0}
    for _ in range(total // MIN_TURNS):
        reachable |= {
            r + part
            for r in reachable
            for part in range(MIN_TURNS, MAX_TURNS + 1)
            if r + part <= total
        }
        if total in reachable:
            return True
    return total in reachable
