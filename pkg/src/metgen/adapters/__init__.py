from .base import (
    Adapter,
    Embedder,
    MaskedPrediction,
    MaskedPredictor,
    SentenceScorer,
    Seq2Seq,
    Symbolizer,
    VerbScorer,
)
from .fakes import (
    BrokenAdapter,
    FakeEmbedder,
    FakeMaskedPredictor,
    FakeSentenceScorer,
    FakeSeq2Seq,
    FakeSymbolizer,
    FakeVerbScorer,
    stable_fraction,
    stable_seed,
)
from .registry import (
    SLOTS,
    AdapterRegistry,
    builtin_registry,
    load_registry,
)

__all__ = [
    "Adapter",
    "AdapterRegistry",
    "BrokenAdapter",
    "Embedder",
    "FakeEmbedder",
    "FakeMaskedPredictor",
    "FakeSentenceScorer",
    "FakeSeq2Seq",
    "FakeSymbolizer",
    "FakeVerbScorer",
    "MaskedPrediction",
    "MaskedPredictor",
    "SLOTS",
    "SentenceScorer",
    "Seq2Seq",
    "Symbolizer",
    "VerbScorer",
    "builtin_registry",
    "load_registry",
    "stable_fraction",
    "stable_seed",
]
