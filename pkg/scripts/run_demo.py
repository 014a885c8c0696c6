#!/usr/bin/env python3
"""End-to-end walkthrough on the bundled fixtures and fake backends.

Builds a tiny parallel corpus, generates metaphorical rewrites, enhances a
poem, and scores the outputs. Everything is deterministic; run it after
changes as a quick sanity pass.
"""

import json
import sys
import tempfile
from pathlib import Path

REPO = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(REPO / "src"))

from metgen.adapters import builtin_registry  # noqa: E402
from metgen.core import Sentence  # noqa: E402
from metgen.detector import DetectorConfig  # noqa: E402
from metgen.enhancer import enhance_quatrain, split_quatrains  # noqa: E402
from metgen.evaluator import evaluate_system  # noqa: E402
from metgen.generator import RescoringConfig, generate_metaphor  # noqa: E402
from metgen.pipeline import PipelineConfig, build_dataset  # noqa: E402

FIXTURES = REPO / "tests" / "fixtures"


def main():
    registry = builtin_registry()

    print("== corpus build ==")
    with tempfile.TemporaryDirectory() as tmp:
        config = PipelineConfig(
            input_path=str(FIXTURES / "corpus_50.txt"),
            output_dir=tmp,
            detector=DetectorConfig(confidence_threshold=0.95),
            train_count=13, valid_count=4, seed=13,
        )
        _, _, report = build_dataset(config, registry)
        print(json.dumps(report["filter"], indent=2))
        print(json.dumps(report["literalize"], indent=2))

    print("\n== generation ==")
    literals = [
        "The wildfire spread through the forest at an amazing speed .",
        "The scream filled the night",
        "My heart beats when he walks in the room",
    ]
    outputs = []
    for text in literals:
        hyp = generate_metaphor(
            Sentence(id="demo", text=text),
            RescoringConfig(lam=1.0, seed=7), registry,
        )
        outputs.append(hyp.text)
        print(f"  {text}\n    -> {hyp.text}   (disc={hyp.disc_score}, "
              f"combined={hyp.combined:.3f})")

    print("\n== poem enhancement ==")
    lines = (FIXTURES / "poem_8.txt").read_text().splitlines()
    quatrains, _ = split_quatrains(lines)
    for q in quatrains:
        result = enhance_quatrain(q, RescoringConfig(lam=1.0, seed=7), registry)
        for diff in result.diffs:
            print(f"  line {diff.line_index}: {diff.verb_before} -> "
                  f"{diff.verb_after}")
            print(f"    {diff.after}")

    print("\n== automatic metrics (outputs vs inputs as references) ==")
    report = evaluate_system(literals, outputs, [[t] for t in literals], registry)
    print(f"  similarity {report.semantic_similarity:.1f} | "
          f"bleu2 {report.bleu2:.1f} | f1 {report.embedding_f1:.3f} | "
          f"n {report.n_items}")


if __name__ == "__main__":
    main()
