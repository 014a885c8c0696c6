#!/usr/bin/env python3
"""Regenerate the frozen expected outputs under tests/fixtures/.

The corpus goldens are produced by a deliberately straight-line pass
(sequential loop, inline dedup/shuffle/split) so the pipeline module's
orchestration is checked against an independent path. Run from the repo
root after changing fixtures, then review the diff before committing.
"""

import json
import random
import sys
from pathlib import Path

REPO = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(REPO / "src"))

from fastapi.testclient import TestClient  # noqa: E402

from metgen.adapters import builtin_registry  # noqa: E402
from metgen.core import Sentence, Source, extract_verbs, write_pairs  # noqa: E402
from metgen.detector import DetectorConfig  # noqa: E402
from metgen.generator import RescoringConfig, generate_metaphor, nll, rerank  # noqa: E402
from metgen.literalizer import LiteralizeConfig, literalize  # noqa: E402
from metgen.service import ServiceConfig, create_app  # noqa: E402

FIXTURES = REPO / "tests" / "fixtures"
GOLDEN = FIXTURES / "golden"

TRAIN_COUNT, VALID_COUNT, SEED = 13, 4, 13


def reference_corpus_build(registry):
    """Straight-line mirror of the corpus build used to freeze goldens."""
    config = DetectorConfig(confidence_threshold=0.95)
    lit_config = LiteralizeConfig()
    lines = (FIXTURES / "corpus_50.txt").read_text(encoding="utf-8").splitlines()

    total = 0
    predicted = 0
    retained = []
    for lineno, line in enumerate(lines, start=1):
        total += 1
        if not line.strip():
            continue
        sentence = Sentence(id=f"line-{lineno:06d}", text=line, source=Source.POETRY)
        scored = [
            (verb, registry.verb_scorer.score_verb(sentence, verb))
            for verb in extract_verbs(sentence, registry.tagger)
        ]
        best = None
        for verb, score in scored:
            p = score.p_metaphoric
            if p >= config.confidence_threshold and (best is None or p > best[1]):
                best = (verb, p)
        max_p = max((s.p_metaphoric for _, s in scored), default=0.0)
        if best is not None or max_p > 0.5:
            predicted += 1
        if best is not None:
            retained.append((sentence, best[0]))

    pairs = []
    no_survivor = 0
    for sentence, verb in retained:
        pair = literalize(sentence, verb, lit_config, registry)
        if pair is None:
            no_survivor += 1
        else:
            pairs.append(pair)

    seen = set()
    unique = []
    for pair in pairs:
        key = (pair.literal_text, pair.metaphor_text)
        if key not in seen:
            seen.add(key)
            unique.append(pair)

    order = list(range(len(unique)))
    random.Random(SEED).shuffle(order)
    shuffled = [unique[i] for i in order]
    train = shuffled[:TRAIN_COUNT]
    valid = shuffled[TRAIN_COUNT:TRAIN_COUNT + VALID_COUNT]

    GOLDEN.mkdir(parents=True, exist_ok=True)
    write_pairs(train, GOLDEN / "train.jsonl")
    write_pairs(valid, GOLDEN / "valid.jsonl")
    report = {
        "input_file": "corpus_50.txt",
        "variant": "pairs",
        "seed": SEED,
        "confidence_threshold": 0.95,
        "filter": {
            "total_lines": total,
            "predicted_metaphoric": predicted,
            "retained_high_confidence": len(retained),
            "skipped_adapter_errors": 0,
        },
        "literalize": {
            "attempted": len(retained),
            "no_survivor": no_survivor,
            "pairs": len(pairs),
            "pairs_after_dedup": len(unique),
        },
        "split": {
            "train": len(train),
            "valid": len(valid),
            "requested_train": TRAIN_COUNT,
            "requested_valid": VALID_COUNT,
            "clamped": TRAIN_COUNT + VALID_COUNT > len(unique),
        },
    }
    with open(GOLDEN / "report.json", "w", encoding="utf-8", newline="\n") as fh:
        json.dump(report, fh, indent=2, ensure_ascii=False)
        fh.write("\n")
    print(f"corpus goldens: {len(retained)} retained, {len(unique)} unique pairs")


ELIGIBLE_LINES = [
    "And the valleys are covered with misty veils ,",
    "The river runs quietly past the silent town ,",
    "He walked to the market in the rain .",
    "Old men sat by the harbour all day .",
    "The farmer ate his supper in silence .",
    "The pines whispered secrets to the listening night .",
    "Her laughter danced across the quiet room .",
    "The grey clouds wept upon the barren field .",
    "Shadows crept along the garden wall .",
    "The tired soldiers marched across the bridge .",
    "We rested beside the quiet water .",
    "The child held a smooth grey stone .",
]

INELIGIBLE_LINES = [
    "And the hills have a shimmer of light between ,",
    "Quiet hills , a pale sky , an empty road .",
    "Stars , stars , and the long cold road .",
    "night night night",
    "It is what it is .",
]


def make_quatrains():
    rng = random.Random(2024)
    quatrains = []
    for i in range(30):
        if i % 5 == 4:
            lines = rng.choices(INELIGIBLE_LINES, k=4)
        else:
            lines = rng.sample(ELIGIBLE_LINES, 3) + [rng.choice(INELIGIBLE_LINES)]
            rng.shuffle(lines)
        quatrains.append({"id": f"q{i:02d}", "lines": lines})
    path = FIXTURES / "quatrains.json"
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(quatrains, fh, indent=2, ensure_ascii=False)
        fh.write("\n")
    print(f"quatrains: {len(quatrains)}")


def make_generation_golden(registry):
    text = "The wildfire spread through the forest at an amazing speed ."
    rescoring = RescoringConfig(lam=1.0, k=5, num_hypotheses=10, seed=7)
    sentence = Sentence(id="golden", text=text)
    best = generate_metaphor(sentence, rescoring, registry)
    hyps = registry.seq2seq.sample(text, rescoring.k, rescoring.num_hypotheses,
                                   rescoring.seed)
    ranked = rerank(hyps, rescoring.lam, registry)
    seen = set()
    candidates = []
    for hyp in ranked:
        if hyp.text in seen:
            continue
        seen.add(hyp.text)
        candidates.append({
            "text": hyp.text, "nll": nll(hyp), "disc": hyp.disc_score,
            "combined": hyp.combined,
        })
    payload = {"input": text, "output": best.text, "candidates": candidates}
    with open(FIXTURES / "golden_generate.json", "w", encoding="utf-8",
              newline="\n") as fh:
        json.dump(payload, fh, indent=2, ensure_ascii=False)
        fh.write("\n")
    print(f"generation golden: {best.text}")


def make_service_goldens(registry):
    client = TestClient(create_app(registry, ServiceConfig()))

    suggest = client.post(
        "/suggest", json={"text": "The tax cut will help the economy", "seed": 7}
    )
    assert suggest.status_code == 200, suggest.text
    (FIXTURES / "golden_suggest.json").write_bytes(suggest.content)

    poem = (FIXTURES / "poem_8.txt").read_text(encoding="utf-8")
    enhance = client.post("/enhance", json={"poem": poem, "seed": 7})
    assert enhance.status_code == 200, enhance.text
    (FIXTURES / "golden_enhance.json").write_bytes(enhance.content)
    print("service goldens written")


def main():
    registry = builtin_registry()
    reference_corpus_build(registry)
    make_quatrains()
    make_generation_golden(registry)
    make_service_goldens(registry)


if __name__ == "__main__":
    main()
