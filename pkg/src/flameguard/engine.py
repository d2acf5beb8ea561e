"""Per-message moderation decisions and per-user flame accounting.

Every message a user sends is scanned against the censor lexicon.  Each
distinct entry that matches raises the user's lifetime flame count by
one.  Crossing the block threshold gets the user blocked for a fixed
duration; below that, a violation earns a warning while the masked text
is still delivered.  The count never resets on its own, so repeat
offenders whose block has expired are re-blocked on the very next
violation.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from datetime import datetime, timedelta
from enum import Enum

from .lexicon import CensorLexicon, FlameCategory, MatchMode, MatchSet, find_matches, mask

# Flame intensity is reported on a 1..10 scale; counts past the cap all
# read as 10.
INTENSITY_CAP = 10


class Action(str, Enum):
    """What the server should do with a message."""

    DELIVER = "deliver"
    WARN_AND_DELIVER = "warn_and_deliver"
    BLOCK = "block"


@dataclass(frozen=True)
class ModerationPolicy:
    """Tunable thresholds for the moderation engine."""

    hostile_threshold: int = 5
    block_threshold: int = 7
    block_duration: timedelta = timedelta(hours=24)
    match_mode: MatchMode = MatchMode.SUBSTRING

    def __post_init__(self) -> None:
        if self.hostile_threshold < 1:
            raise ValueError("hostile_threshold must be at least 1")
        if self.block_threshold < self.hostile_threshold:
            raise ValueError("block_threshold must be >= hostile_threshold")
        if self.block_duration <= timedelta(0):
            raise ValueError("block_duration must be positive")


@dataclass(frozen=True)
class UserFlameState:
    """Everything persisted about one user."""

    name: str
    count: int = 0
    category_tallies: dict[FlameCategory, int] = field(default_factory=dict)
    blocked_until: datetime | None = None

    def __post_init__(self) -> None:
        if self.count < 0:
            raise ValueError(f"negative flame count for {self.name!r}")
        if self.count != sum(self.category_tallies.values()):
            raise ValueError(
                f"flame count {self.count} does not equal category tally "
                f"sum {sum(self.category_tallies.values())} for {self.name!r}"
            )


@dataclass(frozen=True)
class Verdict:
    """Outcome of assessing one message."""

    action: Action
    masked_text: str
    matched: MatchSet
    new_count: int
    intensity: int


def intensity(count: int) -> int:
    """Flame intensity for a count: the count itself, capped at 10."""
    return min(count, INTENSITY_CAP)


def is_blocked(state: UserFlameState, now: datetime) -> bool:
    """Whether the user's block is still in force at ``now``."""
    return state.blocked_until is not None and state.blocked_until > now


def is_hostile(state: UserFlameState, policy: ModerationPolicy) -> bool:
    """Whether the user's count has reached the hostile threshold."""
    return state.count >= policy.hostile_threshold


def assess(
    state: UserFlameState,
    text: str,
    lexicon: CensorLexicon,
    policy: ModerationPolicy,
    now: datetime,
) -> tuple[Verdict, UserFlameState]:
    """Scan one message and decide its fate.

    Pure function: returns the verdict plus the user's next state and
    touches nothing else.  The count grows by the number of distinct
    entries matched.  A clean message is always delivered unchanged,
    even for a user whose count already sits past the block threshold
    (their block, once expired, only re-engages on a further
    violation).

    Args:
        state: the sender's current flame state (must not be blocked).
        text: raw message text.
        lexicon: active censor lexicon.
        policy: thresholds and matching mode.
        now: decision time; a block runs from here.

    Returns:
        ``(verdict, new_state)``.  ``new_state is state`` when the
        message was clean.
    """
    matched = find_matches(lexicon, text, policy.match_mode)
    new_count = state.count + matched.distinct_entry_count
    if not matched:
        return (
            Verdict(Action.DELIVER, text, matched, new_count, intensity(new_count)),
            state,
        )
    tallies = dict(state.category_tallies)
    for word_match in matched.matches:
        tallies[word_match.category] = tallies.get(word_match.category, 0) + 1
    masked_text = mask(text, matched)
    if new_count >= policy.block_threshold:
        action = Action.BLOCK
        blocked_until = now + policy.block_duration
    else:
        action = Action.WARN_AND_DELIVER
        blocked_until = state.blocked_until
    new_state = replace(
        state, count=new_count, category_tallies=tallies, blocked_until=blocked_until
    )
    verdict = Verdict(action, masked_text, matched, new_count, intensity(new_count))
    return verdict, new_state
