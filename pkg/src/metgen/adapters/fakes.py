"""Deterministic fixture-driven adapter implementations.

All fakes are pure functions of (fixture tables, inputs, seed). Randomness
is derived from SHA-256 so two processes produce identical bytes; the
process-salted builtin hash() is never used.
"""

import hashlib
import json
import math
import random
from pathlib import Path

import numpy as np

from ..core import (
    AdapterError,
    DecodedHypothesis,
    DEFAULT_TAGGER,
    InvalidInput,
    MetaphoricityScore,
    Sentence,
    SymbolBeamSet,
    VerbOccurrence,
    VerbTagger,
    tokenize,
)
from .base import (
    Embedder,
    MaskedPrediction,
    MaskedPredictor,
    SentenceScorer,
    Seq2Seq,
    Symbolizer,
    VerbScorer,
    check_masked_input,
    check_sampling_args,
    check_verb_in_sentence,
)


def stable_fraction(*parts: str) -> float:
    """Deterministic pseudo-uniform value in [0, 1) from string parts."""
    digest = hashlib.sha256("|".join(parts).encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big") / 2**64


def stable_seed(*parts: object) -> int:
    digest = hashlib.sha256("|".join(str(p) for p in parts).encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big")


def _load_json(path: str | Path) -> dict:
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


class FakeMaskedPredictor(MaskedPredictor):
    """Masked-slot filler backed by an explicit table plus a hashed fallback.

    Texts listed in the table return their fixed candidate lists. Any other
    text gets every vocabulary surface, scored by a stable hash of
    (text, surface), so corpus-scale runs behave deterministically without
    enumerating every sentence in the fixture.
    """

    def __init__(
        self,
        table: dict[str, list[tuple[str, float]]] | None = None,
        vocabulary: list[str] | None = None,
    ):
        self.table = dict(table or {})
        self.vocabulary = list(vocabulary or [])

    @classmethod
    def from_file(cls, path: str | Path) -> "FakeMaskedPredictor":
        data = _load_json(path)
        table = {
            text: [(str(s), float(p)) for s, p in entries]
            for text, entries in data.get("table", {}).items()
        }
        return cls(table=table, vocabulary=[str(v) for v in data.get("vocabulary", [])])

    def predict_masked(self, text: str, n: int) -> list[MaskedPrediction]:
        check_masked_input(text, n)
        if text in self.table:
            scored = list(self.table[text])
        else:
            scored = [
                (surface, 0.001 + 0.499 * stable_fraction("mask", text, surface))
                for surface in self.vocabulary
            ]
        scored.sort(key=lambda sp: (-sp[1], sp[0]))
        return [MaskedPrediction(surface, prob) for surface, prob in scored[:n]]


class FakeVerbScorer(VerbScorer):
    """Per-lemma metaphoricity table with a constant (or hashed) fallback."""

    def __init__(
        self, by_lemma: dict[str, float] | None = None, fallback: float | str = 0.5
    ):
        self.by_lemma = dict(by_lemma or {})
        self.fallback = fallback

    @classmethod
    def from_file(cls, path: str | Path) -> "FakeVerbScorer":
        data = _load_json(path)
        return cls(
            by_lemma={k: float(v) for k, v in data.get("p_metaphoric", {}).items()},
            fallback=data.get("fallback", 0.5),
        )

    def score_verb(self, sentence: Sentence, verb: VerbOccurrence) -> MetaphoricityScore:
        check_verb_in_sentence(sentence, verb)
        p = self.by_lemma.get(verb.lemma)
        if p is None:
            if self.fallback == "hash":
                p = stable_fraction("verb", verb.lemma)
            else:
                p = float(self.fallback)
        return MetaphoricityScore.metaphoric(p)


class FakeSentenceScorer(SentenceScorer):
    """Lexicon rule: 0.9 when a listed metaphoric verb is present, a low
    constant when only other verbs are, and 0.0 for verb-free text."""

    def __init__(
        self,
        metaphoric_lemmas: set[str] | None = None,
        hit: float = 0.9,
        miss: float = 0.1,
        empty: float = 0.0,
        tagger: VerbTagger = DEFAULT_TAGGER,
    ):
        self.metaphoric_lemmas = set(metaphoric_lemmas or ())
        self.hit = hit
        self.miss = miss
        self.empty = empty
        self.tagger = tagger

    @classmethod
    def from_file(cls, path: str | Path) -> "FakeSentenceScorer":
        data = _load_json(path)
        return cls(
            metaphoric_lemmas=set(data.get("metaphoric_lemmas", [])),
            hit=float(data.get("hit", 0.9)),
            miss=float(data.get("miss", 0.1)),
            empty=float(data.get("empty", 0.0)),
        )

    def score_sentence(self, text: str) -> float:
        if not text.strip():
            raise InvalidInput("cannot score empty text")
        verbs = self.tagger.verbs(tokenize(text))
        if not verbs:
            return self.empty
        if any(lemma in self.metaphoric_lemmas for _, lemma in verbs):
            return self.hit
        return self.miss


class FakeSymbolizer(Symbolizer):
    """Symbol beams keyed on the first verb lemma that has a table entry."""

    def __init__(
        self,
        by_lemma: dict[str, list[str]] | None = None,
        tagger: VerbTagger = DEFAULT_TAGGER,
    ):
        self.by_lemma = {k: list(v) for k, v in (by_lemma or {}).items()}
        self.tagger = tagger

    @classmethod
    def from_file(cls, path: str | Path) -> "FakeSymbolizer":
        return cls(by_lemma=_load_json(path).get("by_lemma", {}))

    def symbols_of(self, text: str) -> SymbolBeamSet:
        for _, lemma in self.tagger.verbs(tokenize(text)):
            beams = self.by_lemma.get(lemma)
            if beams is not None:
                if len(beams) < 5:
                    raise AdapterError(
                        f"symbol backend returned {len(beams)} beams for {lemma!r}"
                    )
                return SymbolBeamSet.of(*beams[:5])
        raise AdapterError(f"no symbol beams derivable for text: {text!r}")


class FakeEmbedder(Embedder):
    """Hash-seeded pseudo-random unit vectors, with optional pinned entries."""

    def __init__(self, dim: int = 64, table: dict[str, list[float]] | None = None):
        self.dim = dim
        self.table = {k: list(v) for k, v in (table or {}).items()}

    @classmethod
    def from_file(cls, path: str | Path) -> "FakeEmbedder":
        data = _load_json(path)
        return cls(dim=int(data.get("dim", 64)), table=data.get("vectors", {}))

    def embed(self, text: str) -> np.ndarray:
        if not text.strip():
            raise InvalidInput("cannot embed empty text")
        if text in self.table:
            vec = np.asarray(self.table[text], dtype=np.float64)
        else:
            rng = np.random.Generator(np.random.PCG64(stable_seed("embed", text)))
            vec = rng.standard_normal(self.dim)
        norm = float(np.linalg.norm(vec))
        if norm == 0.0:
            raise AdapterError("zero vector in embedding table")
        return vec / norm


class FakeSeq2Seq(Seq2Seq):
    """Table-driven conditional model sampled with top-k truncation.

    A model for a source is a list of per-step token distributions
    (normalized at load). Sources without an entry fall back to echoing
    their own tokens with probability 1. Recorded logprobs are the model's
    full-distribution probabilities; top-k only restricts sampling.
    """

    def __init__(self, models: dict[str, list[dict[str, float]]] | None = None):
        self.models = {}
        for source, steps in (models or {}).items():
            self.models[source] = [self._normalize(step) for step in steps]

    @staticmethod
    def _normalize(step: dict[str, float]) -> dict[str, float]:
        total = sum(step.values())
        if total <= 0:
            raise AdapterError("step distribution has no probability mass")
        return {tok: p / total for tok, p in step.items()}

    @classmethod
    def from_file(cls, path: str | Path) -> "FakeSeq2Seq":
        data = _load_json(path)
        models: dict[str, list[dict[str, float]]] = {}
        for source, spec in data.get("sources", {}).items():
            if "steps" in spec:
                models[source] = [dict(step) for step in spec["steps"]]
            elif "substitute" in spec:
                sub = spec["substitute"]
                index, choices = int(sub["index"]), dict(sub["choices"])
                steps: list[dict[str, float]] = []
                for i, token in enumerate(tokenize(source)):
                    steps.append(choices if i == index else {token: 1.0})
                models[source] = steps
            else:
                raise AdapterError(f"model for {source!r} has no steps")
        return cls(models=models)

    def steps_for(self, source: str) -> list[dict[str, float]]:
        steps = self.models.get(source)
        if steps is None:
            steps = [{token: 1.0} for token in tokenize(source)]
            if not steps:
                raise AdapterError("cannot sample from an empty source")
        return steps

    @staticmethod
    def top_k_support(step: dict[str, float], k: int) -> list[tuple[str, float]]:
        ranked = sorted(step.items(), key=lambda tp: (-tp[1], tp[0]))
        return ranked[:k]

    def sample(
        self, source: str, k: int, num_hypotheses: int, seed: int
    ) -> list[DecodedHypothesis]:
        check_sampling_args(k, num_hypotheses)
        steps = self.steps_for(source)
        rng = random.Random(stable_seed("seq2seq", source, k, num_hypotheses, seed))
        hypotheses = []
        for _ in range(num_hypotheses):
            tokens: list[str] = []
            logprobs: list[float] = []
            for step in steps:
                support = self.top_k_support(step, k)
                total = sum(p for _, p in support)
                draw = rng.random() * total
                cumulative = 0.0
                chosen, prob = support[-1]
                for token, p in support:
                    cumulative += p
                    if draw < cumulative:
                        chosen, prob = token, p
                        break
                tokens.append(chosen)
                logprobs.append(math.log(prob) if prob < 1.0 else 0.0)
            hypotheses.append(DecodedHypothesis(tuple(tokens), tuple(logprobs)))
        return hypotheses


class BrokenAdapter(
    MaskedPredictor, VerbScorer, SentenceScorer, Symbolizer, Embedder, Seq2Seq
):
    """Fails every call; used to exercise skip-and-log and health paths."""

    def __init__(self, reason: str = "backend deliberately broken"):
        self.reason = reason
        self.dim = 0

    def _fail(self):
        raise AdapterError(self.reason)

    def health(self) -> None:
        self._fail()

    def predict_masked(self, text, n):
        self._fail()

    def score_verb(self, sentence, verb):
        self._fail()

    def score_sentence(self, text):
        self._fail()

    def symbols_of(self, text):
        self._fail()

    def embed(self, text):
        self._fail()

    def sample(self, source, k, num_hypotheses, seed):
        self._fail()
