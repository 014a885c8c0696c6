"""End-to-end corpus builder: ingest lines, detect, literalize, split, write."""

import json
import logging
import random
from collections.abc import Iterable, Iterator
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from .adapters.registry import AdapterRegistry
from .core import (
    MASK_TOKEN,
    InvalidConfig,
    LiteralMetaphorPair,
    Sentence,
    VerbOccurrence,
    replace_token,
    write_pairs,
)
from .detector import DetectorConfig, FilterReport, filter_corpus
from .literalizer import LiteralizeConfig, literalize

log = logging.getLogger(__name__)

VARIANTS = ("pairs", "masked")


@dataclass
class PipelineConfig:
    input_path: str
    output_dir: str
    detector: DetectorConfig = field(default_factory=DetectorConfig)
    literalize: LiteralizeConfig = field(default_factory=LiteralizeConfig)
    train_count: int = 90_000
    valid_count: int = 3_498
    seed: int = 0
    dataset_variant: str = "pairs"
    workers: int = 1

    def __post_init__(self):
        if self.train_count < 0 or self.valid_count < 0:
            raise InvalidConfig("split counts must be >= 0")
        if self.dataset_variant not in VARIANTS:
            raise InvalidConfig(f"variant must be one of {VARIANTS}")
        if self.workers < 1:
            raise InvalidConfig("workers must be >= 1")


def split_pairs(
    pairs: list[LiteralMetaphorPair], train_count: int, valid_count: int, seed: int
) -> tuple[list[LiteralMetaphorPair], list[LiteralMetaphorPair], bool]:
    """Seeded-shuffle split into disjoint train/valid lists.

    Counts are clamped to the available supply (with a warning) so tiny
    corpora still produce a dataset. Returns (train, valid, clamped).
    """
    order = list(range(len(pairs)))
    random.Random(seed).shuffle(order)
    shuffled = [pairs[i] for i in order]
    clamped = train_count + valid_count > len(shuffled)
    if clamped:
        log.warning(
            "requested %d+%d pairs but only %d available; clamping",
            train_count, valid_count, len(shuffled),
        )
    train = shuffled[:train_count]
    valid = shuffled[train_count:train_count + valid_count]
    return train, valid, clamped


def make_masked_variant(
    pairs: Iterable[LiteralMetaphorPair],
) -> Iterator[LiteralMetaphorPair]:
    """Metaphor-masking variant: source is the metaphor with its verb masked.

    Models trained on this variant learn mask infilling instead of
    verb-to-verb mapping; reinserting metaphor_verb into the source
    reconstructs the target exactly.
    """
    for pair in pairs:
        yield LiteralMetaphorPair(
            literal_text=replace_token(
                pair.metaphor_text, pair.verb_token_index, MASK_TOKEN
            ),
            metaphor_text=pair.metaphor_text,
            verb_token_index=pair.verb_token_index,
            symbols=pair.symbols,
            literal_verb=MASK_TOKEN,
            metaphor_verb=pair.metaphor_verb,
            p_literal_of_replacement=pair.p_literal_of_replacement,
        )


def dedupe_pairs(pairs: Iterable[LiteralMetaphorPair]) -> list[LiteralMetaphorPair]:
    """Drop exact (literal, metaphor) duplicates, keeping first occurrences."""
    seen: set[tuple[str, str]] = set()
    unique = []
    for pair in pairs:
        key = (pair.literal_text, pair.metaphor_text)
        if key in seen:
            continue
        seen.add(key)
        unique.append(pair)
    return unique


def _literalize_stream(
    retained: Iterable[tuple[Sentence, VerbOccurrence]],
    config: LiteralizeConfig,
    registry: AdapterRegistry,
    workers: int,
) -> Iterator[LiteralMetaphorPair | None]:
    if workers == 1:
        for sentence, verb in retained:
            yield literalize(sentence, verb, config, registry)
        return
    # executor.map preserves input order, so the merge stays deterministic
    with ThreadPoolExecutor(max_workers=workers) as pool:
        yield from pool.map(
            lambda item: literalize(item[0], item[1], config, registry), retained
        )


def build_dataset(
    config: PipelineConfig, registry: AdapterRegistry
) -> tuple[Path, Path, dict]:
    """Run the full corpus build; returns (train path, valid path, report).

    Output is byte-identical across runs for fixed (inputs, config, seed):
    deduplication precedes the seeded split, and the report carries counts
    only, never timestamps.
    """
    out_dir = Path(config.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    filter_report = FilterReport()

    with open(config.input_path, encoding="utf-8") as fh:
        retained = filter_corpus(fh, config.detector, registry, filter_report)
        pairs: list[LiteralMetaphorPair] = []
        no_survivor = 0
        for pair in _literalize_stream(retained, config.literalize, registry,
                                       config.workers):
            if pair is None:
                no_survivor += 1
            else:
                pairs.append(pair)

    unique = dedupe_pairs(pairs)
    if config.dataset_variant == "masked":
        unique = list(make_masked_variant(unique))
    train, valid, clamped = split_pairs(
        unique, config.train_count, config.valid_count, config.seed
    )

    train_path = out_dir / "train.jsonl"
    valid_path = out_dir / "valid.jsonl"
    write_pairs(train, train_path)
    write_pairs(valid, valid_path)

    report = {
        "input_file": Path(config.input_path).name,
        "variant": config.dataset_variant,
        "seed": config.seed,
        "confidence_threshold": config.detector.confidence_threshold,
        "filter": {
            "total_lines": filter_report.total_lines,
            "predicted_metaphoric": filter_report.predicted_metaphoric,
            "retained_high_confidence": filter_report.retained_high_confidence,
            "skipped_adapter_errors": filter_report.skipped_adapter_errors,
        },
        "literalize": {
            "attempted": filter_report.retained_high_confidence,
            "no_survivor": no_survivor,
            "pairs": len(pairs),
            "pairs_after_dedup": len(unique),
        },
        "split": {
            "train": len(train),
            "valid": len(valid),
            "requested_train": config.train_count,
            "requested_valid": config.valid_count,
            "clamped": clamped,
        },
    }
    report_path = out_dir / "report.json"
    with open(report_path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(report, fh, indent=2, ensure_ascii=False)
        fh.write("\n")
    return train_path, valid_path, report
