"""Command-line entry points wrapping the pipeline, generator, and service."""

import json
import logging
import sys

import click

from .adapters.registry import load_registry
from .core import Sentence, Source
from .detector import DetectorConfig
from .evaluator import evaluate_system
from .generator import RescoringConfig, generate_metaphor, nll, rerank
from .literalizer import LiteralizeConfig
from .pipeline import PipelineConfig, build_dataset


@click.group()
@click.option("--verbose", is_flag=True, help="Enable debug logging.")
def main(verbose: bool):
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s",
    )


@main.command("build-corpus")
@click.option("--input", "input_path", required=True, type=click.Path(exists=True))
@click.option("--out", "output_dir", required=True, type=click.Path())
@click.option("--threshold", default=0.95, show_default=True)
@click.option("--candidates", default=200, show_default=True)
@click.option("--overlap", default=5, show_default=True)
@click.option("--train", "train_count", default=90_000, show_default=True)
@click.option("--valid", "valid_count", default=3_498, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--variant", type=click.Choice(["pairs", "masked"]), default="pairs",
              show_default=True)
@click.option("--workers", default=1, show_default=True)
@click.option("--adapters", default="builtin", show_default=True,
              help="Adapter config path, or 'builtin' for the packaged fakes.")
def build_corpus(input_path, output_dir, threshold, candidates, overlap,
                 train_count, valid_count, seed, variant, workers, adapters):
    """Build a parallel literal/metaphorical corpus from poetry lines."""
    registry = load_registry(adapters)
    config = PipelineConfig(
        input_path=input_path,
        output_dir=output_dir,
        detector=DetectorConfig(confidence_threshold=threshold),
        literalize=LiteralizeConfig(n_candidates=candidates,
                                    required_overlap=overlap),
        train_count=train_count,
        valid_count=valid_count,
        seed=seed,
        dataset_variant=variant,
        workers=workers,
    )
    train_path, valid_path, report = build_dataset(config, registry)
    click.echo(json.dumps(report, indent=2))
    click.echo(f"wrote {train_path} and {valid_path}", err=True)


@main.command()
@click.option("--text", required=True)
@click.option("--lambda", "lam", default=1.0, show_default=True)
@click.option("--k", default=5, show_default=True)
@click.option("--hypotheses", default=10, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--adapters", default="builtin", show_default=True)
def generate(text, lam, k, hypotheses, seed, adapters):
    """Generate a metaphorical rewrite of a literal sentence."""
    registry = load_registry(adapters)
    rescoring = RescoringConfig(lam=lam, k=k, num_hypotheses=hypotheses, seed=seed)
    sentence = Sentence(id="cli", text=text, source=Source.USER)
    hyps = registry.seq2seq.sample(text, rescoring.k, rescoring.num_hypotheses,
                                   rescoring.seed)
    ranked = rerank(hyps, rescoring.lam, registry)
    best = generate_metaphor(sentence, rescoring, registry)
    seen = set()
    candidates = []
    for hyp in ranked:
        if hyp.text in seen:
            continue
        seen.add(hyp.text)
        candidates.append({
            "text": hyp.text,
            "nll": nll(hyp),
            "disc": hyp.disc_score,
            "combined": hyp.combined,
        })
    click.echo(json.dumps(
        {"input": text, "output": best.text, "candidates": candidates}, indent=2
    ))


@main.command()
@click.option("--inputs", required=True, type=click.Path(exists=True),
              help="JSONL of {'text': ...} literal inputs.")
@click.option("--outputs", required=True, type=click.Path(exists=True),
              help="JSONL of {'text': ...} system outputs.")
@click.option("--refs", required=True, type=click.Path(exists=True),
              help="JSONL of {'refs': [...]} reference lists.")
@click.option("--adapters", default="builtin", show_default=True)
def evaluate(inputs, outputs, refs, adapters):
    """Score system outputs with similarity, BLEU-2, and embedding F1."""
    registry = load_registry(adapters)

    def read_jsonl(path, key):
        with open(path, encoding="utf-8") as fh:
            return [json.loads(line)[key] for line in fh if line.strip()]

    report = evaluate_system(
        read_jsonl(inputs, "text"),
        read_jsonl(outputs, "text"),
        read_jsonl(refs, "refs"),
        registry,
    )
    click.echo(json.dumps({
        "semantic_similarity": report.semantic_similarity,
        "bleu2": report.bleu2,
        "embedding_f1": report.embedding_f1,
        "n_items": report.n_items,
    }, indent=2))


@main.command()
@click.option("--poem", required=True, type=click.Path(exists=True))
@click.option("--lambda", "lam", default=1.0, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--adapters", default="builtin", show_default=True)
def enhance(poem, lam, seed, adapters):
    """Rewrite one literal line per quatrain of a poem as a metaphor."""
    from .enhancer import enhance_quatrain, split_quatrains

    registry = load_registry(adapters)
    rescoring = RescoringConfig(lam=lam, seed=seed)
    with open(poem, encoding="utf-8") as fh:
        quatrains, dropped = split_quatrains(fh)
    results = []
    for q in quatrains:
        outcome = enhance_quatrain(q, rescoring, registry)
        results.append({
            "before": list(q.lines),
            "after": list(outcome.quatrain.lines),
            "diff": [vars(d) for d in outcome.diffs],
        })
    click.echo(json.dumps(
        {"quatrains": results, "dropped_lines": dropped}, indent=2
    ))


@main.command()
@click.option("--input", "input_path", required=True, type=click.Path(exists=True))
@click.option("--out", "output_dir", required=True, type=click.Path())
@click.option("--threshold", default=0.95, show_default=True)
@click.option("--adapters", default="builtin", show_default=True)
def detect(input_path, output_dir, threshold, adapters):
    """Filter a poetry corpus down to high-confidence metaphoric sentences."""
    from pathlib import Path

    from .detector import FilterReport, filter_corpus, score_all_verbs

    registry = load_registry(adapters)
    out = Path(output_dir)
    out.mkdir(parents=True, exist_ok=True)
    report = FilterReport()
    config = DetectorConfig(confidence_threshold=threshold)
    with open(input_path, encoding="utf-8") as src, \
            open(out / "retained.jsonl", "w", encoding="utf-8",
                 newline="\n") as dst:
        for sentence, verb in filter_corpus(src, config, registry, report):
            score = dict(score_all_verbs(sentence, registry))[verb]
            dst.write(json.dumps({
                "id": sentence.id,
                "text": sentence.text,
                "verb_index": verb.token_index,
                "p_metaphoric": score.p_metaphoric,
            }, ensure_ascii=False) + "\n")
    report_payload = {
        "total_lines": report.total_lines,
        "predicted_metaphoric": report.predicted_metaphoric,
        "retained_high_confidence": report.retained_high_confidence,
        "skipped_adapter_errors": report.skipped_adapter_errors,
        "confidence_threshold": threshold,
    }
    with open(out / "report.json", "w", encoding="utf-8", newline="\n") as fh:
        json.dump(report_payload, fh, indent=2)
        fh.write("\n")
    click.echo(json.dumps(report_payload, indent=2))


@main.command()
@click.option("--config", "config_path", default=None, type=click.Path(exists=True),
              help="JSON settings file; METGEN_* env vars override it.")
@click.option("--port", default=None, type=int)
@click.option("--host", default=None)
@click.option("--adapters", default=None)
@click.option("--log-dir", default=None, type=click.Path())
@click.option("--lambda", "lam", default=None, type=float)
def serve(config_path, port, host, adapters, log_dir, lam):
    """Run the writing-assistant HTTP service."""
    import uvicorn

    from .service import ServiceConfig, create_app, load_settings

    settings = load_settings(config_path)
    if port is not None:
        settings.port = port
    if host is not None:
        settings.host = host
    if adapters is not None:
        settings.adapters = adapters
    if log_dir is not None:
        settings.log_dir = log_dir
    if lam is not None:
        settings.default_lambda = lam

    registry = load_registry(settings.adapters)
    log_path = None
    if settings.log_dir:
        from pathlib import Path

        Path(settings.log_dir).mkdir(parents=True, exist_ok=True)
        log_path = str(Path(settings.log_dir) / "requests.jsonl")
    app = create_app(registry, ServiceConfig(
        default_lambda=settings.default_lambda, request_log_path=log_path,
    ))
    uvicorn.run(app, host=settings.host, port=settings.port)


@main.command("serve-adapters")
@click.option("--port", default=8001, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--adapters", default="builtin", show_default=True)
def serve_adapters(port, host, adapters):
    """Expose a registry over the remote adapter protocol."""
    import uvicorn

    from .service import create_adapter_app

    registry = load_registry(adapters)
    uvicorn.run(create_adapter_app(registry), host=host, port=port)


if __name__ == "__main__":
    sys.exit(main())
