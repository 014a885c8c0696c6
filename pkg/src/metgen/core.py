"""Domain types, text utilities, and pair serialization shared by all stages."""

import json
import re
from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass, replace
from enum import Enum
from pathlib import Path
from typing import Protocol

from .lexicon import (
    DETERMINER_BLOCKERS,
    MODALS,
    PREPOSITION_BLOCKERS,
    lemmatize_verb,
)

MASK_TOKEN = "[MASK]"


class InvalidInput(ValueError):
    """A caller-supplied value violates an operation's precondition."""


class InvalidConfig(ValueError):
    """A configuration value is out of its allowed range."""


class AdapterError(RuntimeError):
    """A model backend failed; callers may skip-and-log instead of aborting."""


class GenerationFailed(RuntimeError):
    """No usable hypothesis survived sampling and reranking."""


class PairParseError(InvalidInput):
    """A pair record on disk is malformed; carries the 1-based line number."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


# ---------------------------------------------------------------------------
# Tokenization
#
# Rule set: the mask token is atomic; otherwise maximal runs of word
# characters (with internal apostrophes/hyphens kept, so "don't" is one
# token) are tokens, and every remaining non-space character is its own
# token.
# ---------------------------------------------------------------------------

_TOKEN_RE = re.compile(r"\[MASK\]|\w+(?:['’-]\w+)*|[^\w\s]")


def tokenize_with_spans(text: str) -> list[tuple[str, int, int]]:
    """Tokenize, returning (token, start, end) character spans."""
    return [(m.group(), m.start(), m.end()) for m in _TOKEN_RE.finditer(text)]


def tokenize(text: str) -> list[str]:
    return [m.group() for m in _TOKEN_RE.finditer(text)]


def replace_token(text: str, token_index: int, replacement: str) -> str:
    """Return text with exactly one token replaced, all other bytes intact."""
    spans = tokenize_with_spans(text)
    if not 0 <= token_index < len(spans):
        raise InvalidInput(
            f"token index {token_index} out of range for {len(spans)} tokens"
        )
    _, start, end = spans[token_index]
    return text[:start] + replacement + text[end:]


def normalize_symbol(raw: str) -> str:
    """Case-fold, trim, and collapse internal whitespace."""
    return " ".join(raw.split()).casefold()


# ---------------------------------------------------------------------------
# Domain types
# ---------------------------------------------------------------------------


class Source(str, Enum):
    POETRY = "poetry-corpus"
    USER = "user"
    TEST = "test-set"


@dataclass(frozen=True)
class Sentence:
    id: str
    text: str
    source: Source = Source.USER

    def __post_init__(self):
        if not self.text.strip():
            raise InvalidInput("sentence text is empty")

    @property
    def tokens(self) -> list[str]:
        return tokenize(self.text)


@dataclass(frozen=True)
class VerbOccurrence:
    sentence_id: str
    token_index: int
    surface: str
    lemma: str


@dataclass(frozen=True)
class MetaphoricityScore:
    p_metaphoric: float
    p_literal: float

    def __post_init__(self):
        for p in (self.p_metaphoric, self.p_literal):
            if not 0.0 <= p <= 1.0:
                raise InvalidInput(f"probability {p} outside [0, 1]")
        if abs(self.p_metaphoric + self.p_literal - 1.0) > 1e-9:
            raise InvalidInput("p_metaphoric + p_literal must equal 1")

    @classmethod
    def metaphoric(cls, p: float) -> "MetaphoricityScore":
        return cls(p_metaphoric=p, p_literal=1.0 - p)


@dataclass(frozen=True)
class SymbolBeamSet:
    """The top-5 commonsense symbols evoked by a sentence, normalized."""

    beams: tuple[str, ...]

    def __post_init__(self):
        if len(self.beams) != 5:
            raise InvalidInput(f"expected exactly 5 beams, got {len(self.beams)}")
        for beam in self.beams:
            if not beam:
                raise InvalidInput("empty symbol beam")
            if beam != normalize_symbol(beam):
                raise InvalidInput(f"beam {beam!r} is not normalized")
        if len(set(self.beams)) != 5:
            raise InvalidInput("symbol beams must be distinct")

    @classmethod
    def of(cls, *beams: str) -> "SymbolBeamSet":
        return cls(tuple(normalize_symbol(b) for b in beams))

    def as_set(self) -> frozenset[str]:
        return frozenset(self.beams)


@dataclass(frozen=True)
class CandidateVerb:
    surface: str
    lm_prob: float
    score: MetaphoricityScore
    symbol_overlap: int | None = None

    def __post_init__(self):
        if not 0.0 <= self.lm_prob <= 1.0:
            raise InvalidInput(f"lm_prob {self.lm_prob} outside [0, 1]")
        if self.symbol_overlap is not None and not 0 <= self.symbol_overlap <= 5:
            raise InvalidInput("symbol_overlap outside [0, 5]")


@dataclass(frozen=True)
class LiteralMetaphorPair:
    literal_text: str
    metaphor_text: str
    verb_token_index: int
    symbols: SymbolBeamSet
    literal_verb: str
    metaphor_verb: str
    p_literal_of_replacement: float

    def __post_init__(self):
        lit = tokenize(self.literal_text)
        met = tokenize(self.metaphor_text)
        i = self.verb_token_index
        if len(lit) != len(met) or not 0 <= i < len(lit):
            raise InvalidInput("pair texts do not align at the verb position")
        if lit[i] != self.literal_verb or met[i] != self.metaphor_verb:
            raise InvalidInput("verb fields disagree with the texts")
        diffs = [j for j, (a, b) in enumerate(zip(lit, met)) if a != b]
        if diffs not in ([], [i]):
            raise InvalidInput("texts must differ only at the verb token")
        if not 0.0 <= self.p_literal_of_replacement <= 1.0:
            raise InvalidInput("p_literal_of_replacement outside [0, 1]")


@dataclass(frozen=True)
class DecodedHypothesis:
    tokens: tuple[str, ...]
    token_logprobs: tuple[float, ...]
    disc_score: float | None = None
    combined: float | None = None

    def __post_init__(self):
        if len(self.tokens) < 1:
            raise InvalidInput("hypothesis must have at least one token")
        if len(self.tokens) != len(self.token_logprobs):
            raise InvalidInput("tokens and logprobs lengths differ")
        for lp in self.token_logprobs:
            if lp > 0.0:
                raise InvalidInput(f"logprob {lp} is positive")
        if self.disc_score is not None and not 0.0 <= self.disc_score <= 1.0:
            raise InvalidInput("disc_score outside [0, 1]")

    @property
    def text(self) -> str:
        return " ".join(self.tokens)

    def with_scores(self, disc_score: float, combined: float) -> "DecodedHypothesis":
        return replace(self, disc_score=disc_score, combined=combined)


# ---------------------------------------------------------------------------
# Verb tagging
# ---------------------------------------------------------------------------


class VerbTagger(Protocol):
    """Pluggable POS contract: return (token_index, lemma) for each verb."""

    def verbs(self, tokens: Sequence[str]) -> list[tuple[int, str]]: ...


class RuleVerbTagger:
    """Lexicon-driven reference tagger.

    A token is tagged as a verb when it lemmatizes into the verb lexicon
    and context does not veto it: tokens directly after a determiner,
    possessive, or preposition are read as nouns, and a token directly
    before a modal cannot be a finite verb.
    """

    def verbs(self, tokens: Sequence[str]) -> list[tuple[int, str]]:
        out: list[tuple[int, str]] = []
        for i, token in enumerate(tokens):
            lemma = lemmatize_verb(token)
            if lemma is None:
                continue
            prev = tokens[i - 1].casefold() if i > 0 else ""
            nxt = tokens[i + 1].casefold() if i + 1 < len(tokens) else ""
            if prev in DETERMINER_BLOCKERS or prev in PREPOSITION_BLOCKERS:
                continue
            if nxt in MODALS:
                continue
            out.append((i, lemma))
        return out


DEFAULT_TAGGER = RuleVerbTagger()


def extract_verbs(sentence: Sentence, tagger: VerbTagger) -> list[VerbOccurrence]:
    """All verb tokens of a sentence, in token order."""
    tokens = sentence.tokens
    return [
        VerbOccurrence(sentence.id, i, tokens[i], lemma)
        for i, lemma in tagger.verbs(tokens)
    ]


# ---------------------------------------------------------------------------
# Pair serialization (JSONL, one object per line, UTF-8, LF)
# ---------------------------------------------------------------------------

_PAIR_FIELDS = (
    "literal", "metaphor", "verb_index", "literal_verb", "metaphor_verb",
    "symbols", "p_literal",
)


def pair_to_record(pair: LiteralMetaphorPair) -> dict:
    return {
        "literal": pair.literal_text,
        "metaphor": pair.metaphor_text,
        "verb_index": pair.verb_token_index,
        "literal_verb": pair.literal_verb,
        "metaphor_verb": pair.metaphor_verb,
        "symbols": list(pair.symbols.beams),
        "p_literal": pair.p_literal_of_replacement,
    }


def pair_from_record(record: dict) -> LiteralMetaphorPair:
    missing = [k for k in _PAIR_FIELDS if k not in record]
    if missing:
        raise KeyError(", ".join(missing))
    return LiteralMetaphorPair(
        literal_text=record["literal"],
        metaphor_text=record["metaphor"],
        verb_token_index=record["verb_index"],
        symbols=SymbolBeamSet(tuple(record["symbols"])),
        literal_verb=record["literal_verb"],
        metaphor_verb=record["metaphor_verb"],
        p_literal_of_replacement=record["p_literal"],
    )


def write_pairs(pairs: Iterable[LiteralMetaphorPair], path: str | Path) -> int:
    """Write pairs as JSONL; returns the number of records written."""
    n = 0
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for pair in pairs:
            fh.write(json.dumps(pair_to_record(pair), ensure_ascii=False))
            fh.write("\n")
            n += 1
    return n


def read_pairs(path: str | Path) -> Iterator[LiteralMetaphorPair]:
    """Stream pairs from JSONL; malformed records raise PairParseError."""
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
                yield pair_from_record(record)
            except (json.JSONDecodeError, KeyError, TypeError, InvalidInput) as exc:
                raise PairParseError(str(exc), line=lineno) from exc
