"""Rewrite a metaphorical sentence into a literal one with the same symbols.

The procedure: mask the metaphoric verb, pull candidate fillers from the
masked LM, keep those whose substituted sentence evokes the same top-5
commonsense symbols as the input, and pick the most literal survivor.
"""

import logging
from dataclasses import dataclass

from .adapters.base import MaskedPrediction
from .adapters.registry import AdapterRegistry
from .core import (
    MASK_TOKEN,
    AdapterError,
    CandidateVerb,
    InvalidConfig,
    LiteralMetaphorPair,
    Sentence,
    SymbolBeamSet,
    VerbOccurrence,
    replace_token,
    tokenize,
)
from .lexicon import lemmatize_verb

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class LiteralizeConfig:
    n_candidates: int = 200
    required_overlap: int = 5
    exclude_original_verb: bool = True

    def __post_init__(self):
        if not 1 <= self.required_overlap <= 5:
            raise InvalidConfig(f"required_overlap {self.required_overlap} outside [1, 5]")
        if self.n_candidates < 1:
            raise InvalidConfig("n_candidates must be >= 1")


def mask_verb(sentence: Sentence, verb: VerbOccurrence) -> str:
    """The sentence text with the verb token replaced by the mask slot."""
    return replace_token(sentence.text, verb.token_index, MASK_TOKEN)


def unmask(masked: str, surface: str) -> str:
    """Inverse of mask_verb: reinsert a surface into the mask slot."""
    index = tokenize(masked).index(MASK_TOKEN)
    return replace_token(masked, index, surface)


def symbol_overlap(a: SymbolBeamSet, b: SymbolBeamSet) -> int:
    """Cardinality of the normalized-set intersection, in [0, 5]."""
    return len(a.as_set() & b.as_set())


def rank_by_literalness(
    masked: str,
    candidates: list[MaskedPrediction],
    registry: AdapterRegistry,
) -> list[CandidateVerb]:
    """Score each filler in context and sort most-literal-first.

    Candidates that trip an adapter error are dropped and logged. The sort
    is stable, so equally scored candidates keep their LM-probability order.
    """
    scored: list[CandidateVerb] = []
    slot = tokenize(masked).index(MASK_TOKEN)
    for pred in candidates:
        text = unmask(masked, pred.surface)
        sentence = Sentence(id="candidate", text=text)
        verb = VerbOccurrence(
            sentence_id=sentence.id,
            token_index=slot,
            surface=pred.surface,
            lemma=lemmatize_verb(pred.surface) or pred.surface,
        )
        try:
            score = registry.verb_scorer.score_verb(sentence, verb)
        except AdapterError as exc:
            log.debug("dropping candidate %r: %s", pred.surface, exc)
            continue
        scored.append(CandidateVerb(pred.surface, pred.prob, score))
    scored.sort(key=lambda c: c.score.p_metaphoric)
    return scored


def literalize(
    sentence: Sentence,
    verb: VerbOccurrence,
    config: LiteralizeConfig,
    registry: AdapterRegistry,
) -> LiteralMetaphorPair | None:
    """Build one [literal, metaphorical] training pair, or None.

    Survivors must (a) still be verbs at the masked position, (b) reach the
    required symbol-beam overlap with the input sentence. Among survivors
    the lowest metaphoricity wins; ties fall back to higher LM probability,
    then lexicographic surface order.
    """
    masked = mask_verb(sentence, verb)
    try:
        predictions = registry.masked_predictor.predict_masked(
            masked, config.n_candidates
        )
        input_symbols = registry.symbolizer.symbols_of(sentence.text)
    except AdapterError as exc:
        log.info("literalize failed for %s: %s", sentence.id, exc)
        return None

    original_lemma = lemmatize_verb(verb.surface) or verb.surface

    best: tuple | None = None
    for pred in predictions:
        if config.exclude_original_verb:
            lemma = lemmatize_verb(pred.surface) or pred.surface
            if pred.surface == verb.surface or lemma == original_lemma:
                continue
        candidate_text = replace_token(sentence.text, verb.token_index, pred.surface)
        candidate = Sentence(id=f"{sentence.id}#cand", text=candidate_text)
        tagged = dict(registry.tagger.verbs(candidate.tokens))
        if verb.token_index not in tagged:
            continue
        cand_verb = VerbOccurrence(
            candidate.id, verb.token_index, pred.surface, tagged[verb.token_index]
        )
        try:
            cand_symbols = registry.symbolizer.symbols_of(candidate_text)
            score = registry.verb_scorer.score_verb(candidate, cand_verb)
        except AdapterError as exc:
            log.debug("dropping candidate %r: %s", pred.surface, exc)
            continue
        if symbol_overlap(input_symbols, cand_symbols) < config.required_overlap:
            continue
        key = (score.p_metaphoric, -pred.prob, pred.surface)
        if best is None or key < best[0]:
            best = (key, pred, score, candidate_text)

    if best is None:
        return None
    _, pred, score, candidate_text = best
    return LiteralMetaphorPair(
        literal_text=candidate_text,
        metaphor_text=sentence.text,
        verb_token_index=verb.token_index,
        symbols=input_symbols,
        literal_verb=pred.surface,
        metaphor_verb=verb.surface,
        p_literal_of_replacement=score.p_literal,
    )
