"""Automatic metrics and baseline generators for system comparison."""

import logging
import math
from collections import Counter
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from .adapters.base import Embedder
from .adapters.registry import AdapterRegistry
from .core import (
    AdapterError,
    InvalidInput,
    Sentence,
    VerbOccurrence,
    replace_token,
    tokenize,
)
from .lexicon import lemmatize_verb
from .literalizer import mask_verb, symbol_overlap, unmask

log = logging.getLogger(__name__)

# Smoothing for zero n-gram counts on tiny corpora; irrelevant at scale.
BLEU_EPSILON = 1e-9

LEXREP_TOP_CANDIDATES = 25
LEXREP_POOL_SIZE = 200


@dataclass(frozen=True)
class MetricsReport:
    semantic_similarity: float
    bleu2: float
    embedding_f1: float
    n_items: int

    def __post_init__(self):
        if self.n_items < 1:
            raise InvalidInput("a metrics report needs at least one item")
        if not 0.0 <= self.semantic_similarity <= 100.0:
            raise InvalidInput("semantic_similarity outside [0, 100]")
        if not 0.0 <= self.bleu2 <= 100.0 + 1e-9:
            raise InvalidInput("bleu2 outside [0, 100]")
        if not 0.0 <= self.embedding_f1 <= 1.0:
            raise InvalidInput("embedding_f1 outside [0, 1]")


def semantic_similarity(input_text: str, output_text: str,
                        registry: AdapterRegistry) -> float:
    """100 x cosine similarity of sentence embeddings, clamped at 0."""
    if not input_text.strip() or not output_text.strip():
        raise InvalidInput("cannot compare empty texts")
    a = registry.embedder.embed(input_text)
    b = registry.embedder.embed(output_text)
    return 100.0 * max(0.0, float(np.dot(a, b)))


def _ngrams(tokens: list[str], n: int) -> Counter:
    return Counter(tuple(tokens[i:i + n]) for i in range(len(tokens) - n + 1))


def corpus_bleu2(
    hypotheses: Sequence[str], reference_lists: Sequence[Sequence[str]]
) -> float:
    """Corpus-level BLEU with unigram+bigram precision and brevity penalty.

    Clipped counts are taken against the per-item maximum across references;
    the reference length is the closest to the hypothesis (ties prefer the
    shorter). Zero clipped counts are smoothed to BLEU_EPSILON.
    """
    if len(hypotheses) != len(reference_lists):
        raise InvalidInput("hypothesis and reference lists differ in length")
    if not hypotheses:
        raise InvalidInput("empty corpus")
    clipped = [0.0, 0.0]
    totals = [0, 0]
    hyp_len = 0
    ref_len = 0
    for hyp, refs in zip(hypotheses, reference_lists):
        if not refs:
            raise InvalidInput("every item needs at least one reference")
        hyp_tokens = tokenize(hyp)
        ref_token_lists = [tokenize(r) for r in refs]
        hyp_len += len(hyp_tokens)
        ref_len += min(
            (len(r) for r in ref_token_lists),
            key=lambda L: (abs(L - len(hyp_tokens)), L),
        )
        for n in (1, 2):
            hyp_counts = _ngrams(hyp_tokens, n)
            max_ref: Counter = Counter()
            for ref_tokens in ref_token_lists:
                for gram, count in _ngrams(ref_tokens, n).items():
                    max_ref[gram] = max(max_ref[gram], count)
            clipped[n - 1] += sum(
                min(count, max_ref[gram]) for gram, count in hyp_counts.items()
            )
            totals[n - 1] += sum(hyp_counts.values())
    if hyp_len == 0:
        return 0.0
    log_precision = 0.0
    for c, t in zip(clipped, totals):
        numerator = c if c > 0 else BLEU_EPSILON
        denominator = t if t > 0 else 1
        log_precision += 0.5 * math.log(numerator / denominator)
    brevity = 1.0 if hyp_len > ref_len else math.exp(1.0 - ref_len / hyp_len)
    return 100.0 * brevity * math.exp(log_precision)


def embedding_f1(hypothesis: str, reference: str, embedder: Embedder) -> float:
    """Greedy token-matching F1 over contextual-token cosine similarities.

    Per-token best matches are clamped at 0 so the score stays in [0, 1]
    even for adversarial embedding tables.
    """
    hyp_tokens = tokenize(hypothesis)
    ref_tokens = tokenize(reference)
    if not hyp_tokens or not ref_tokens:
        raise InvalidInput("cannot score empty texts")
    hyp_vecs = np.stack([embedder.embed(t) for t in hyp_tokens])
    ref_vecs = np.stack([embedder.embed(t) for t in ref_tokens])
    sims = hyp_vecs @ ref_vecs.T
    precision = float(np.mean(np.maximum(sims.max(axis=1), 0.0)))
    recall = float(np.mean(np.maximum(sims.max(axis=0), 0.0)))
    if precision + recall == 0.0:
        return 0.0
    return 2 * precision * recall / (precision + recall)


@dataclass(frozen=True)
class LexRepResult:
    text: str
    replaced: bool
    verb_after: str | None = None


def lexrep_generate(
    literal: Sentence, verb: VerbOccurrence, registry: AdapterRegistry
) -> LexRepResult:
    """Lexical-replacement baseline: most metaphoric symbol-compatible filler.

    Mirror image of literalization: rank mask fillers by metaphoricity
    descending, keep the metaphoric ones (p > 0.5) up to the top 25, rerank
    by symbol overlap with the input (descending, ties by metaphoricity),
    and substitute the winner. Returns the input flagged unchanged when
    nothing survives.
    """
    masked = mask_verb(literal, verb)
    try:
        predictions = registry.masked_predictor.predict_masked(
            masked, LEXREP_POOL_SIZE
        )
        input_symbols = registry.symbolizer.symbols_of(literal.text)
    except AdapterError as exc:
        log.info("lexrep fell back to input for %s: %s", literal.id, exc)
        return LexRepResult(literal.text, replaced=False)

    original_lemma = lemmatize_verb(verb.surface) or verb.surface
    scored = []
    for pred in predictions:
        lemma = lemmatize_verb(pred.surface) or pred.surface
        if pred.surface == verb.surface or lemma == original_lemma:
            continue
        text = unmask(masked, pred.surface)
        candidate = Sentence(id=f"{literal.id}#lexrep", text=text)
        tagged = dict(registry.tagger.verbs(candidate.tokens))
        if verb.token_index not in tagged:
            continue
        cand_verb = VerbOccurrence(
            candidate.id, verb.token_index, pred.surface, tagged[verb.token_index]
        )
        try:
            score = registry.verb_scorer.score_verb(candidate, cand_verb)
        except AdapterError:
            continue
        if score.p_metaphoric > 0.5:
            scored.append((score.p_metaphoric, pred, text))
    scored.sort(key=lambda item: -item[0])
    top = scored[:LEXREP_TOP_CANDIDATES]

    best = None
    for p_met, pred, text in top:
        try:
            overlap = symbol_overlap(
                input_symbols, registry.symbolizer.symbols_of(text)
            )
        except AdapterError:
            continue
        key = (-overlap, -p_met)
        if best is None or key < best[0]:
            best = (key, pred, text)
    if best is None:
        return LexRepResult(literal.text, replaced=False)
    _, pred, text = best
    return LexRepResult(text, replaced=True, verb_after=pred.surface)


def evaluate_system(
    inputs: Sequence[str],
    outputs: Sequence[str],
    references: Sequence[Sequence[str]],
    registry: AdapterRegistry,
) -> MetricsReport:
    """Aggregate the three automatic metrics over aligned item lists.

    Multi-reference policy: BLEU-2 clips against all references; the
    embedding F1 per item is the max over references.
    """
    if not inputs:
        raise InvalidInput("nothing to evaluate")
    if not (len(inputs) == len(outputs) == len(references)):
        raise InvalidInput("inputs, outputs, and references are misaligned")
    sims = [
        semantic_similarity(i, o, registry) for i, o in zip(inputs, outputs)
    ]
    f1s = [
        max(embedding_f1(out, ref, registry.embedder) for ref in refs)
        for out, refs in zip(outputs, references)
    ]
    return MetricsReport(
        semantic_similarity=float(np.mean(sims)),
        bleu2=corpus_bleu2(outputs, references),
        embedding_f1=float(np.mean(f1s)),
        n_items=len(inputs),
    )
