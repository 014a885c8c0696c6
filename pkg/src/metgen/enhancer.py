"""Poem enhancement: rewrite one literal line per quatrain as a metaphor."""

import logging
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field

from .adapters.registry import AdapterRegistry
from .core import AdapterError, GenerationFailed, InvalidInput, Sentence, VerbOccurrence
from .detector import DEFAULT_STOP_VERBS, most_literal_verb, score_all_verbs
from .generator import RescoringConfig, generate_metaphor

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class Quatrain:
    lines: tuple[str, str, str, str]
    source_poem_id: str = "poem"

    def __post_init__(self):
        if len(self.lines) != 4:
            raise InvalidInput("a quatrain has exactly 4 lines")
        if any(not line.strip() for line in self.lines):
            raise InvalidInput("quatrain lines must be non-empty")


@dataclass(frozen=True)
class LineDiff:
    line_index: int
    before: str
    after: str
    verb_before: str
    verb_after: str | None


@dataclass
class EnhanceResult:
    quatrain: Quatrain
    diffs: list[LineDiff] = field(default_factory=list)

    @property
    def changed(self) -> bool:
        return bool(self.diffs)


def split_quatrains(
    lines: Iterable[str], poem_id: str = "poem"
) -> tuple[list[Quatrain], int]:
    """Group non-blank lines into consecutive quatrains.

    Returns (quatrains, dropped) where dropped counts the trailing
    remainder of fewer than four lines.
    """
    kept = [line.rstrip("\n") for line in lines]
    kept = [line for line in kept if line.strip()]
    quatrains = []
    for start in range(0, len(kept) - 3, 4):
        quatrains.append(
            Quatrain(tuple(kept[start:start + 4]), source_poem_id=poem_id)
        )
    return quatrains, len(kept) % 4


def pick_target(
    q: Quatrain,
    registry: AdapterRegistry,
    stop_verbs: Iterable[str] = DEFAULT_STOP_VERBS,
) -> tuple[int, VerbOccurrence] | None:
    """The (line, verb) with the globally highest literal probability.

    Stop verbs are excluded; ties go to the earliest line, then the lowest
    token index.
    """
    best: tuple[int, VerbOccurrence] | None = None
    best_p = -1.0
    for line_index, line in enumerate(q.lines):
        sentence = Sentence(id=f"{q.source_poem_id}:{line_index}", text=line)
        verb = most_literal_verb(sentence, registry, stop_verbs)
        if verb is None:
            continue
        score = dict(score_all_verbs(sentence, registry))[verb]
        if score.p_literal > best_p:
            best, best_p = (line_index, verb), score.p_literal
    return best


def enhance_quatrain(
    q: Quatrain, rescoring: RescoringConfig, registry: AdapterRegistry
) -> EnhanceResult:
    """Replace the most literal line with a generated metaphorical rewrite.

    Degrades to the unchanged quatrain when no verb is eligible, generation
    fails, or the sampler only reproduces the original line.
    """
    target = pick_target(q, registry)
    if target is None:
        return EnhanceResult(q)
    line_index, verb = target
    line = q.lines[line_index]
    sentence = Sentence(id=f"{q.source_poem_id}:{line_index}", text=line)
    try:
        hyp = generate_metaphor(sentence, rescoring, registry)
    except (AdapterError, GenerationFailed) as exc:
        log.info("enhancement left quatrain unchanged: %s", exc)
        return EnhanceResult(q)
    if list(hyp.tokens) == sentence.tokens:
        return EnhanceResult(q)
    new_lines = list(q.lines)
    new_lines[line_index] = hyp.text
    diff = LineDiff(
        line_index=line_index,
        before=line,
        after=hyp.text,
        verb_before=verb.surface,
        verb_after=_changed_token(sentence.tokens, list(hyp.tokens), verb.token_index),
    )
    return EnhanceResult(Quatrain(tuple(new_lines), q.source_poem_id), [diff])


def _changed_token(
    before: Sequence[str], after: Sequence[str], verb_index: int
) -> str | None:
    """Best-effort guess at the rewritten verb surface."""
    if len(before) == len(after):
        if after[verb_index] != before[verb_index]:
            return after[verb_index]
        changed = [b for a, b in zip(before, after) if a != b]
        return changed[0] if changed else None
    return None
