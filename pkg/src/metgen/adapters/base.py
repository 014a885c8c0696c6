"""Contracts for the neural backends the pipeline consumes.

Every contract has at least two implementations: a deterministic fake
(fakes.py) driven by fixture tables, and an HTTP client (remote.py) for a
real model server. Invalid-input errors mean the caller broke a
precondition; AdapterError means the backend failed and the caller may
skip-and-log.
"""

from abc import ABC, abstractmethod
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from ..core import (
    MASK_TOKEN,
    AdapterError,
    DecodedHypothesis,
    InvalidInput,
    MetaphoricityScore,
    Sentence,
    SymbolBeamSet,
    VerbOccurrence,
    tokenize,
)


@dataclass(frozen=True)
class MaskedPrediction:
    surface: str
    prob: float

    def __post_init__(self):
        if not 0.0 <= self.prob <= 1.0:
            raise InvalidInput(f"prediction prob {self.prob} outside [0, 1]")


def check_masked_input(text: str, n: int) -> None:
    slots = tokenize(text).count(MASK_TOKEN)
    if slots != 1:
        raise InvalidInput(f"expected exactly one {MASK_TOKEN} slot, found {slots}")
    if n < 1:
        raise InvalidInput(f"candidate count must be >= 1, got {n}")


def check_verb_in_sentence(sentence: Sentence, verb: VerbOccurrence) -> None:
    tokens = sentence.tokens
    if not 0 <= verb.token_index < len(tokens):
        raise InvalidInput(
            f"verb index {verb.token_index} out of range for {len(tokens)} tokens"
        )
    if tokens[verb.token_index] != verb.surface:
        raise InvalidInput(
            f"verb surface {verb.surface!r} does not match token "
            f"{tokens[verb.token_index]!r}"
        )


class Adapter(ABC):
    """Shared plumbing: health checks and a declared concurrency ceiling."""

    #: max concurrent in-flight calls the backend tolerates; None = unlimited
    max_concurrency: int | None = None

    def health(self) -> None:
        """Raise AdapterError when the backend is unreachable or broken."""


class MaskedPredictor(Adapter):
    @abstractmethod
    def predict_masked(self, text: str, n: int) -> list[MaskedPrediction]:
        """Top-n fillers for the single mask slot, sorted by prob descending."""

    def predict_masked_batch(
        self, texts: Sequence[str], n: int
    ) -> list[list[MaskedPrediction]]:
        return [self.predict_masked(t, n) for t in texts]


class VerbScorer(Adapter):
    @abstractmethod
    def score_verb(self, sentence: Sentence, verb: VerbOccurrence) -> MetaphoricityScore:
        """Metaphoric-vs-literal probability for one verb in context."""

    def score_verbs_batch(
        self, items: Sequence[tuple[Sentence, VerbOccurrence]]
    ) -> list[MetaphoricityScore]:
        return [self.score_verb(s, v) for s, v in items]


class SentenceScorer(Adapter):
    @abstractmethod
    def score_sentence(self, text: str) -> float:
        """Probability that the sentence contains a metaphorical verb."""

    def score_sentences_batch(self, texts: Sequence[str]) -> list[float]:
        return [self.score_sentence(t) for t in texts]


class Symbolizer(Adapter):
    @abstractmethod
    def symbols_of(self, text: str) -> SymbolBeamSet:
        """Top-5 commonsense symbols evoked by the text."""

    def symbols_of_batch(self, texts: Sequence[str]) -> list[SymbolBeamSet]:
        return [self.symbols_of(t) for t in texts]


class Embedder(Adapter):
    dim: int

    @abstractmethod
    def embed(self, text: str) -> np.ndarray:
        """Unit-norm sentence embedding of fixed dimension."""

    def embed_batch(self, texts: Sequence[str]) -> list[np.ndarray]:
        return [self.embed(t) for t in texts]


class Seq2Seq(Adapter):
    @abstractmethod
    def sample(
        self, source: str, k: int, num_hypotheses: int, seed: int
    ) -> list[DecodedHypothesis]:
        """Draw hypotheses by top-k sampling; reproducible for a fixed seed."""

    def sample_batch(
        self, sources: Sequence[str], k: int, num_hypotheses: int, seed: int
    ) -> list[list[DecodedHypothesis]]:
        return [self.sample(s, k, num_hypotheses, seed) for s in sources]


def check_sampling_args(k: int, num_hypotheses: int) -> None:
    if k < 1:
        raise InvalidInput(f"k must be >= 1, got {k}")
    if num_hypotheses < 1:
        raise InvalidInput(f"num_hypotheses must be >= 1, got {num_hypotheses}")


__all__ = [
    "Adapter",
    "AdapterError",
    "Embedder",
    "MaskedPrediction",
    "MaskedPredictor",
    "SentenceScorer",
    "Seq2Seq",
    "Symbolizer",
    "VerbScorer",
    "check_masked_input",
    "check_sampling_args",
    "check_verb_in_sentence",
]
