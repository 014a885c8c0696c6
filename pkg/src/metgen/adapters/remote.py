"""HTTP clients for model servers.

Protocol: one JSON POST endpoint per operation, mirroring the contract
signatures, plus GET /health. A transport can be injected so tests can
mount an in-process ASGI backend.
"""

import httpx
import numpy as np

from ..core import (
    AdapterError,
    DecodedHypothesis,
    MetaphoricityScore,
    Sentence,
    SymbolBeamSet,
    VerbOccurrence,
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

DEFAULT_TIMEOUT = 30.0


class _HttpAdapter:
    max_concurrency: int | None = 8

    def __init__(
        self,
        base_url: str,
        timeout: float = DEFAULT_TIMEOUT,
        transport: httpx.BaseTransport | None = None,
    ):
        self.base_url = base_url
        self._client = httpx.Client(
            base_url=base_url, timeout=timeout, transport=transport
        )

    def _post(self, endpoint: str, payload: dict) -> dict:
        try:
            response = self._client.post(endpoint, json=payload)
            response.raise_for_status()
            return response.json()
        except httpx.HTTPError as exc:
            raise AdapterError(f"{self.base_url}{endpoint}: {exc}") from exc

    def health(self) -> None:
        try:
            response = self._client.get("/health")
            response.raise_for_status()
        except httpx.HTTPError as exc:
            raise AdapterError(f"{self.base_url}/health: {exc}") from exc


class RemoteMaskedPredictor(_HttpAdapter, MaskedPredictor):
    def predict_masked(self, text: str, n: int) -> list[MaskedPrediction]:
        check_masked_input(text, n)
        data = self._post("/predict_masked", {"text": text, "n": n})
        return [
            MaskedPrediction(p["surface"], p["prob"]) for p in data["predictions"]
        ]


class RemoteVerbScorer(_HttpAdapter, VerbScorer):
    def score_verb(self, sentence: Sentence, verb: VerbOccurrence) -> MetaphoricityScore:
        check_verb_in_sentence(sentence, verb)
        data = self._post(
            "/score_verb",
            {
                "sentence": {"id": sentence.id, "text": sentence.text,
                             "source": sentence.source.value},
                "verb": {"sentence_id": verb.sentence_id,
                         "token_index": verb.token_index,
                         "surface": verb.surface, "lemma": verb.lemma},
            },
        )
        return MetaphoricityScore(data["p_metaphoric"], data["p_literal"])


class RemoteSentenceScorer(_HttpAdapter, SentenceScorer):
    def score_sentence(self, text: str) -> float:
        return float(self._post("/score_sentence", {"text": text})["score"])


class RemoteSymbolizer(_HttpAdapter, Symbolizer):
    def symbols_of(self, text: str) -> SymbolBeamSet:
        beams = self._post("/symbols_of", {"text": text})["beams"]
        if len(beams) < 5:
            raise AdapterError(f"backend returned {len(beams)} beams")
        return SymbolBeamSet.of(*beams[:5])


class RemoteEmbedder(_HttpAdapter, Embedder):
    def __init__(self, base_url: str, dim: int = 64, **kwargs):
        super().__init__(base_url, **kwargs)
        self.dim = dim

    def embed(self, text: str) -> np.ndarray:
        vector = np.asarray(
            self._post("/embed", {"text": text})["vector"], dtype=np.float64
        )
        norm = float(np.linalg.norm(vector))
        if norm == 0.0:
            raise AdapterError("backend returned a zero embedding")
        return vector / norm


class RemoteSeq2Seq(_HttpAdapter, Seq2Seq):
    def sample(
        self, source: str, k: int, num_hypotheses: int, seed: int
    ) -> list[DecodedHypothesis]:
        check_sampling_args(k, num_hypotheses)
        data = self._post(
            "/seq2seq_sample",
            {"source": source, "k": k, "num_hypotheses": num_hypotheses, "seed": seed},
        )
        return [
            DecodedHypothesis(tuple(h["tokens"]), tuple(h["token_logprobs"]))
            for h in data["hypotheses"]
        ]
