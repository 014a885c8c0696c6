"""Metaphor generation: top-k sampling reranked by a metaphor discriminator.

A hypothesis is scored by combined = nll - lambda * disc, where nll is the
sequence negative log-likelihood and disc is the discriminator's
probability that the sentence is metaphorical. Lower is better, so raising
lambda pushes the pick toward more metaphorical hypotheses.
"""

import logging
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Protocol

import numpy as np

from .adapters.registry import AdapterRegistry
from .core import (
    AdapterError,
    DecodedHypothesis,
    GenerationFailed,
    InvalidConfig,
    InvalidInput,
    LiteralMetaphorPair,
    Sentence,
)

log = logging.getLogger(__name__)

DEFAULT_LAMBDA_GRID = (0.0, 0.25, 0.5, 1.0, 2.0, 4.0)


@dataclass(frozen=True)
class RescoringConfig:
    lam: float = 1.0
    k: int = 5
    num_hypotheses: int = 10
    seed: int = 0

    def __post_init__(self):
        if self.lam < 0:
            raise InvalidConfig(f"lambda must be >= 0, got {self.lam}")
        if self.k < 1 or self.num_hypotheses < 1:
            raise InvalidConfig("k and num_hypotheses must be >= 1")


@dataclass(frozen=True)
class TrainingConfig:
    train_path: str
    valid_path: str
    epochs: int = 70
    max_tokens_per_batch: int = 1024
    checkpoint_selection: str = "valid-perplexity"

    def __post_init__(self):
        if self.epochs < 1:
            raise InvalidConfig("epochs must be >= 1")


def nll(hyp: DecodedHypothesis) -> float:
    """Sequence negative log-likelihood: -sum of token logprobs."""
    return -sum(hyp.token_logprobs)


def combined_score(hyp: DecodedHypothesis, lam: float) -> float:
    """nll minus lambda-weighted discriminator score; lower is better."""
    if lam < 0:
        raise InvalidConfig(f"lambda must be >= 0, got {lam}")
    if hyp.disc_score is None:
        raise InvalidInput("hypothesis has no discriminator score")
    return nll(hyp) - lam * hyp.disc_score


def rerank(
    hyps: list[DecodedHypothesis], lam: float, registry: AdapterRegistry
) -> list[DecodedHypothesis]:
    """Score every hypothesis with the discriminator and sort by combined.

    Ties break by lower nll, then lexicographic text. Hypotheses whose
    discriminator call fails are dropped and logged.
    """
    scored: list[DecodedHypothesis] = []
    for hyp in hyps:
        try:
            disc = registry.sentence_scorer.score_sentence(hyp.text)
        except AdapterError as exc:
            log.warning("dropping hypothesis %r: %s", hyp.text, exc)
            continue
        with_disc = replace(hyp, disc_score=disc)
        scored.append(replace(with_disc, combined=combined_score(with_disc, lam)))
    scored.sort(key=lambda h: (h.combined, nll(h), h.text))
    return scored


def generate_metaphor(
    literal: Sentence, rescoring: RescoringConfig, registry: AdapterRegistry
) -> DecodedHypothesis:
    """Best reranked hypothesis for a literal input; reproducible per seed."""
    hyps = registry.seq2seq.sample(
        literal.text, rescoring.k, rescoring.num_hypotheses, rescoring.seed
    )
    ranked = rerank(hyps, rescoring.lam, registry)
    if not ranked:
        raise GenerationFailed(f"no usable hypothesis for {literal.id!r}")
    return ranked[0]


def _cosine(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.dot(a, b))


def tuning_objective(
    literal_text: str, output_text: str, registry: AdapterRegistry
) -> float:
    """Balance metaphoricity of the output against meaning preservation."""
    disc = registry.sentence_scorer.score_sentence(output_text)
    sim = _cosine(registry.embedder.embed(literal_text),
                  registry.embedder.embed(output_text))
    return 0.5 * (disc + sim)


def tune_lambda(
    valid_pairs: list[LiteralMetaphorPair],
    grid: list[float],
    base: RescoringConfig,
    registry: AdapterRegistry,
) -> tuple[float, dict[float, float]]:
    """Grid-search lambda on validation literals; ties pick the smallest."""
    if not grid:
        raise InvalidInput("lambda grid is empty")
    scores: dict[float, float] = {}
    for lam in grid:
        config = RescoringConfig(
            lam=lam, k=base.k, num_hypotheses=base.num_hypotheses, seed=base.seed
        )
        values = []
        for i, pair in enumerate(valid_pairs):
            literal = Sentence(id=f"valid-{i:05d}", text=pair.literal_text)
            try:
                hyp = generate_metaphor(literal, config, registry)
                values.append(tuning_objective(pair.literal_text, hyp.text, registry))
            except (AdapterError, GenerationFailed) as exc:
                log.warning("tuning skipped item %d at lambda=%s: %s", i, lam, exc)
        scores[lam] = float(np.mean(values)) if values else float("-inf")
    best = max(sorted(scores), key=lambda lam: scores[lam])
    return best, scores


class TrainerBackend(Protocol):
    """External fine-tuning service: consumes a config, returns a checkpoint URI."""

    def train(self, config: TrainingConfig) -> str | None: ...


class DryRunTrainer:
    """Records the run manifest without training anything."""

    def __init__(self):
        self.manifests: list[dict] = []

    def train(self, config: TrainingConfig) -> None:
        self.manifests.append(training_manifest(config))
        return None


def training_manifest(config: TrainingConfig) -> dict:
    return {
        "train_path": str(config.train_path),
        "valid_path": str(config.valid_path),
        "epochs": config.epochs,
        "max_tokens_per_batch": config.max_tokens_per_batch,
        "checkpoint_selection": config.checkpoint_selection,
    }


def finetune(config: TrainingConfig, backend: TrainerBackend) -> dict:
    """Delegate fine-tuning to a backend; returns the recorded manifest."""
    if not Path(config.train_path).exists():
        raise InvalidInput(f"train file not found: {config.train_path}")
    if not Path(config.valid_path).exists():
        raise InvalidInput(f"valid file not found: {config.valid_path}")
    manifest = training_manifest(config)
    manifest["checkpoint_uri"] = backend.train(config)
    return manifest
