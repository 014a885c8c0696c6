"""Sentence- and corpus-level metaphoric-verb detection and filtering."""

import logging
from collections.abc import Iterable, Iterator
from dataclasses import dataclass

from .adapters.registry import AdapterRegistry
from .core import (
    AdapterError,
    InvalidConfig,
    MetaphoricityScore,
    Sentence,
    Source,
    VerbOccurrence,
    extract_verbs,
)
from .lexicon import lemmatize_verb

log = logging.getLogger(__name__)

# Common verbs ignored when hunting for the most literal rewrite target.
DEFAULT_STOP_VERBS = frozenset({"is", "was", "are", "were", "have", "had"})


@dataclass(frozen=True)
class DetectorConfig:
    confidence_threshold: float = 0.95

    def __post_init__(self):
        if not 0.0 <= self.confidence_threshold <= 1.0:
            raise InvalidConfig(
                f"threshold {self.confidence_threshold} outside [0, 1]"
            )


@dataclass
class FilterReport:
    total_lines: int = 0
    predicted_metaphoric: int = 0
    retained_high_confidence: int = 0
    skipped_adapter_errors: int = 0

    def __post_init__(self):
        self.check()

    def check(self) -> None:
        ok = (
            0 <= self.retained_high_confidence <= self.predicted_metaphoric
            <= self.total_lines
        )
        if not ok:
            raise InvalidConfig(f"inconsistent filter report: {self}")


def score_all_verbs(
    sentence: Sentence, registry: AdapterRegistry
) -> list[tuple[VerbOccurrence, MetaphoricityScore]]:
    """One metaphoricity score per extracted verb, in token order."""
    verbs = extract_verbs(sentence, registry.tagger)
    return [(v, registry.verb_scorer.score_verb(sentence, v)) for v in verbs]


def is_metaphoric(
    sentence: Sentence, config: DetectorConfig, registry: AdapterRegistry
) -> tuple[bool, VerbOccurrence | None]:
    """Whether any verb clears the confidence threshold, and the best one.

    The best verb is the argmax of p_metaphoric among qualifying verbs;
    ties go to the lowest token index.
    """
    tau = config.confidence_threshold
    best: VerbOccurrence | None = None
    best_p = -1.0
    for verb, score in score_all_verbs(sentence, registry):
        if score.p_metaphoric >= tau and score.p_metaphoric > best_p:
            best, best_p = verb, score.p_metaphoric
    return best is not None, best


def _max_p_metaphoric(sentence: Sentence, registry: AdapterRegistry) -> float:
    scores = [s.p_metaphoric for _, s in score_all_verbs(sentence, registry)]
    return max(scores, default=0.0)


def filter_corpus(
    lines: Iterable[str],
    config: DetectorConfig,
    registry: AdapterRegistry,
    report: FilterReport | None = None,
) -> Iterator[tuple[Sentence, VerbOccurrence]]:
    """Filter raw poetry lines down to high-confidence metaphoric sentences.

    Yields retained sentences in input order. Lines that trip an adapter
    error are skipped and counted instead of aborting the run. The caller's
    report object is filled in as the stream is consumed; "predicted" counts
    lines the scorer classifies as metaphoric (best verb above 0.5) plus any
    retained below that, which keeps the retained <= predicted invariant at
    every threshold.
    """
    if report is None:
        report = FilterReport()
    for lineno, raw in enumerate(lines, start=1):
        text = raw.rstrip("\n")
        report.total_lines += 1
        if not text.strip():
            continue
        sentence = Sentence(id=f"line-{lineno:06d}", text=text, source=Source.POETRY)
        try:
            keep, best = is_metaphoric(sentence, config, registry)
            predicted = _max_p_metaphoric(sentence, registry) > 0.5
        except AdapterError as exc:
            report.skipped_adapter_errors += 1
            log.warning("skipping line %d after adapter error: %s", lineno, exc)
            continue
        if keep or predicted:
            report.predicted_metaphoric += 1
        if keep and best is not None:
            report.retained_high_confidence += 1
            yield sentence, best
    report.check()


def most_literal_verb(
    sentence: Sentence,
    registry: AdapterRegistry,
    stop_verbs: Iterable[str] = DEFAULT_STOP_VERBS,
) -> VerbOccurrence | None:
    """The non-stop verb with the highest literal probability, if any.

    Stop entries are lemmatized before comparison so every inflection of
    the listed common verbs is excluded. Ties go to the lowest token index.
    """
    stop_lemmas = set()
    for word in stop_verbs:
        stop_lemmas.add(word)
        lemma = lemmatize_verb(word)
        if lemma:
            stop_lemmas.add(lemma)
    best: VerbOccurrence | None = None
    best_p = -1.0
    for verb, score in score_all_verbs(sentence, registry):
        if verb.lemma in stop_lemmas:
            continue
        if score.p_literal > best_p:
            best, best_p = verb, score.p_literal
    return best
