"""Adapter slot wiring from config files and environment overrides.

A config file is a JSON object mapping each slot to either
``fake:<fixture-path>`` (relative paths resolve against the config file)
or a backend URL. The literal string ``builtin`` selects the packaged
fixture for that slot. ``METGEN_ADAPTER_<SLOT>`` environment variables
override individual slots.
"""

import json
import os
import threading
from contextlib import nullcontext
from dataclasses import dataclass, field
from pathlib import Path

from ..core import AdapterError, DEFAULT_TAGGER, InvalidConfig, VerbTagger
from . import fakes, remote
from .base import (
    Embedder,
    MaskedPredictor,
    SentenceScorer,
    Seq2Seq,
    Symbolizer,
    VerbScorer,
)

FIXTURES_DIR = Path(__file__).resolve().parent.parent / "fixtures"

SLOTS = (
    "masked_predictor",
    "verb_scorer",
    "sentence_scorer",
    "symbolizer",
    "embedder",
    "seq2seq",
)

_BUILTIN_FIXTURES = {
    "masked_predictor": "masked.json",
    "verb_scorer": "verbs.json",
    "sentence_scorer": "sentence.json",
    "symbolizer": "symbols.json",
    "embedder": "",
    "seq2seq": "seq2seq.json",
}

_FAKE_LOADERS = {
    "masked_predictor": fakes.FakeMaskedPredictor.from_file,
    "verb_scorer": fakes.FakeVerbScorer.from_file,
    "sentence_scorer": fakes.FakeSentenceScorer.from_file,
    "symbolizer": fakes.FakeSymbolizer.from_file,
    "embedder": fakes.FakeEmbedder.from_file,
    "seq2seq": fakes.FakeSeq2Seq.from_file,
}

_REMOTE_CLASSES = {
    "masked_predictor": remote.RemoteMaskedPredictor,
    "verb_scorer": remote.RemoteVerbScorer,
    "sentence_scorer": remote.RemoteSentenceScorer,
    "symbolizer": remote.RemoteSymbolizer,
    "embedder": remote.RemoteEmbedder,
    "seq2seq": remote.RemoteSeq2Seq,
}


@dataclass
class AdapterRegistry:
    """All model backends the pipeline needs, plus the verb tagger."""

    masked_predictor: MaskedPredictor
    verb_scorer: VerbScorer
    sentence_scorer: SentenceScorer
    symbolizer: Symbolizer
    embedder: Embedder
    seq2seq: Seq2Seq
    tagger: VerbTagger = field(default_factory=lambda: DEFAULT_TAGGER)

    def validate(self) -> None:
        for slot in SLOTS:
            if getattr(self, slot) is None:
                raise InvalidConfig(f"adapter slot {slot!r} is not populated")

    def health(self) -> dict[str, str]:
        """Per-slot reachability: 'ok' or the failure message."""
        report = {}
        for slot in SLOTS:
            try:
                getattr(self, slot).health()
                report[slot] = "ok"
            except AdapterError as exc:
                report[slot] = str(exc)
        return report

    def concurrency_gate(self):
        """Context manager honoring the tightest declared adapter limit."""
        limits = [
            getattr(self, slot).max_concurrency
            for slot in SLOTS
            if getattr(self, slot).max_concurrency is not None
        ]
        if not limits:
            return nullcontext()
        return threading.BoundedSemaphore(min(limits))


def _build_slot(slot: str, spec: str, base_dir: Path):
    if spec == "builtin":
        spec = "fake:"
    if spec.startswith("fake:"):
        path = spec[len("fake:"):]
        loader = _FAKE_LOADERS[slot]
        if not path:
            builtin = _BUILTIN_FIXTURES[slot]
            if not builtin:  # embedder has no table; defaults are fine
                return fakes.FakeEmbedder()
            return loader(FIXTURES_DIR / builtin)
        resolved = Path(path)
        if not resolved.is_absolute():
            resolved = base_dir / resolved
        return loader(resolved)
    if spec.startswith("http://") or spec.startswith("https://"):
        return _REMOTE_CLASSES[slot](spec)
    raise InvalidConfig(f"unrecognized adapter spec for {slot!r}: {spec!r}")


def builtin_registry() -> AdapterRegistry:
    """Registry backed entirely by the packaged fixture fakes."""
    return load_registry("builtin")


def load_registry(
    config: str | Path, env: dict[str, str] | None = None
) -> AdapterRegistry:
    """Build a registry from a config path or the literal 'builtin'."""
    env = dict(os.environ if env is None else env)
    if str(config) == "builtin":
        specs = {slot: "builtin" for slot in SLOTS}
        base_dir = FIXTURES_DIR
    else:
        config_path = Path(config)
        with open(config_path, encoding="utf-8") as fh:
            specs = json.load(fh)
        unknown = set(specs) - set(SLOTS)
        if unknown:
            raise InvalidConfig(f"unknown adapter slots: {sorted(unknown)}")
        base_dir = config_path.resolve().parent
    for slot in SLOTS:
        override = env.get(f"METGEN_ADAPTER_{slot.upper()}")
        if override:
            specs[slot] = override
        if slot not in specs:
            raise InvalidConfig(f"adapter slot {slot!r} missing from config")
    registry = AdapterRegistry(
        **{slot: _build_slot(slot, specs[slot], base_dir) for slot in SLOTS}
    )
    registry.validate()
    return registry
