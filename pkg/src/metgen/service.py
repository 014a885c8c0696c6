"""HTTP facade for generation, literalization, and poem enhancement.

All endpoints are stateless JSON-over-HTTP; with fake adapters and a fixed
seed every response is byte-identical across calls. Error bodies follow
{code, message, detail}.
"""

import json
import logging
import random
import threading
from dataclasses import dataclass
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from .adapters.registry import AdapterRegistry
from .core import (
    AdapterError,
    GenerationFailed,
    InvalidInput,
    Sentence,
    pair_to_record,
    tokenize,
)
from .detector import DetectorConfig, is_metaphoric
from .enhancer import split_quatrains, enhance_quatrain
from .evaluator import semantic_similarity
from .generator import RescoringConfig, nll, rerank
from .literalizer import LiteralizeConfig, literalize

log = logging.getLogger(__name__)


@dataclass
class ServiceConfig:
    default_lambda: float = 1.0
    k: int = 5
    num_hypotheses: int = 10
    max_text_chars: int = 512
    max_poem_lines: int = 200
    request_log_path: str | None = None


@dataclass
class ServiceSettings:
    """Deployment settings: JSON config file with environment overrides."""

    port: int = 8000
    host: str = "127.0.0.1"
    adapters: str = "builtin"
    log_dir: str | None = None
    default_lambda: float = 1.0


def load_settings(
    config_path: str | None = None, env: dict[str, str] | None = None
) -> ServiceSettings:
    """Read service settings; METGEN_* environment variables win."""
    import os

    env = dict(os.environ if env is None else env)
    settings = ServiceSettings()
    if config_path:
        with open(config_path, encoding="utf-8") as fh:
            data = json.load(fh)
        for field_name in ("port", "host", "adapters", "log_dir", "default_lambda"):
            if field_name in data:
                setattr(settings, field_name, data[field_name])
    if "METGEN_PORT" in env:
        settings.port = int(env["METGEN_PORT"])
    if "METGEN_HOST" in env:
        settings.host = env["METGEN_HOST"]
    if "METGEN_ADAPTERS" in env:
        settings.adapters = env["METGEN_ADAPTERS"]
    if "METGEN_LOG_DIR" in env:
        settings.log_dir = env["METGEN_LOG_DIR"]
    if "METGEN_LAMBDA" in env:
        settings.default_lambda = float(env["METGEN_LAMBDA"])
    return settings


class SuggestRequest(BaseModel):
    text: str
    lam: float | None = Field(default=None, alias="lambda")
    k: int | None = None
    num_hypotheses: int | None = None
    seed: int | None = None


class EnhanceRequest(BaseModel):
    poem: str
    lam: float | None = Field(default=None, alias="lambda")
    seed: int | None = None


class LiteralizeRequest(BaseModel):
    text: str
    n_candidates: int | None = None
    required_overlap: int | None = None


def _error(status: int, code: str, message: str, detail: str = "") -> JSONResponse:
    return JSONResponse(
        status_code=status,
        content={"code": code, "message": message, "detail": detail},
    )


class _RequestLog:
    """Append-only JSONL log; one line per request served."""

    def __init__(self, path: str | None):
        self.path = Path(path) if path else None
        self._lock = threading.Lock()

    def append(self, method: str, path: str, status: int) -> None:
        if self.path is None:
            return
        line = json.dumps({"method": method, "path": path, "status": status})
        with self._lock:
            with open(self.path, "a", encoding="utf-8") as fh:
                fh.write(line + "\n")


def create_app(
    registry: AdapterRegistry, config: ServiceConfig | None = None
) -> FastAPI:
    config = config or ServiceConfig()
    app = FastAPI(title="metaphor writing assistant")
    request_log = _RequestLog(config.request_log_path)
    gate = registry.concurrency_gate()

    @app.middleware("http")
    async def _log_requests(request: Request, call_next):
        response = await call_next(request)
        request_log.append(request.method, request.url.path, response.status_code)
        return response

    @app.exception_handler(RequestValidationError)
    async def _on_validation(request: Request, exc: RequestValidationError):
        return _error(400, "invalid-request", "malformed request body", str(exc))

    @app.exception_handler(InvalidInput)
    async def _on_invalid(request: Request, exc: InvalidInput):
        return _error(400, "invalid-input", str(exc))

    @app.exception_handler(AdapterError)
    async def _on_adapter(request: Request, exc: AdapterError):
        return _error(502, "adapter-failure", "a model backend failed", str(exc))

    @app.exception_handler(GenerationFailed)
    async def _on_genfail(request: Request, exc: GenerationFailed):
        return _error(502, "generation-failed", str(exc))

    def _rescoring(lam: float | None, k: int | None, num: int | None,
                   seed: int | None) -> RescoringConfig:
        if seed is None:
            seed = random.randrange(2**31)
        return RescoringConfig(
            lam=config.default_lambda if lam is None else lam,
            k=k or config.k,
            num_hypotheses=num or config.num_hypotheses,
            seed=seed,
        )

    @app.post("/suggest")
    def suggest(body: SuggestRequest):
        text = body.text.strip()
        if not text:
            return _error(400, "invalid-input", "text is empty")
        if len(body.text) > config.max_text_chars:
            return _error(
                400, "invalid-input",
                f"text exceeds {config.max_text_chars} characters",
            )
        sentence = Sentence(id="request", text=body.text)
        if not registry.tagger.verbs(sentence.tokens):
            return _error(422, "no-verb", "no verb found in the input")
        rescoring = _rescoring(body.lam, body.k, body.num_hypotheses, body.seed)
        with gate:
            hyps = registry.seq2seq.sample(
                sentence.text, rescoring.k, rescoring.num_hypotheses, rescoring.seed
            )
            ranked = rerank(hyps, rescoring.lam, registry)
        if not ranked:
            raise GenerationFailed("no usable hypothesis")
        input_tokens = sentence.tokens
        candidates = []
        seen: set[str] = set()
        for hyp in ranked:
            if hyp.text in seen:
                continue
            seen.add(hyp.text)
            verb_before = verb_after = None
            hyp_tokens = list(hyp.tokens)
            if len(hyp_tokens) == len(input_tokens):
                changed = [
                    (a, b) for a, b in zip(input_tokens, hyp_tokens) if a != b
                ]
                if changed:
                    verb_before, verb_after = changed[0]
            candidates.append({
                "text": hyp.text,
                "verb_before": verb_before,
                "verb_after": verb_after,
                "nll": nll(hyp),
                "disc": hyp.disc_score,
                "combined": hyp.combined,
                "similarity": semantic_similarity(sentence.text, hyp.text, registry),
            })
        return {
            "input": body.text,
            "seed": rescoring.seed,
            "candidates": candidates,
            "chosen_index": 0,
        }

    @app.post("/enhance")
    def enhance(body: EnhanceRequest):
        lines = body.poem.splitlines()
        if not any(line.strip() for line in lines):
            return _error(400, "invalid-input", "poem is empty")
        if len(lines) > config.max_poem_lines:
            return _error(
                400, "invalid-input",
                f"poem exceeds {config.max_poem_lines} lines",
            )
        rescoring = _rescoring(body.lam, None, None, body.seed)
        quatrains, dropped = split_quatrains(lines)
        results = []
        for q in quatrains:
            with gate:
                outcome = enhance_quatrain(q, rescoring, registry)
            results.append({
                "before": list(q.lines),
                "after": list(outcome.quatrain.lines),
                "diff": [
                    {
                        "line_index": d.line_index,
                        "before": d.before,
                        "after": d.after,
                        "verb_before": d.verb_before,
                        "verb_after": d.verb_after,
                    }
                    for d in outcome.diffs
                ],
            })
        return {"seed": rescoring.seed, "quatrains": results,
                "dropped_lines": dropped}

    @app.post("/literalize")
    def literalize_endpoint(body: LiteralizeRequest):
        if not body.text.strip():
            return _error(400, "invalid-input", "text is empty")
        sentence = Sentence(id="request", text=body.text)
        # threshold 0 selects the most metaphoric verb when any verb exists
        found, verb = is_metaphoric(
            sentence, DetectorConfig(confidence_threshold=0.0), registry
        )
        if not found or verb is None:
            return _error(422, "no-verb", "no verb found in the input")
        lit_config = LiteralizeConfig(
            n_candidates=body.n_candidates or 200,
            required_overlap=body.required_overlap or 5,
        )
        with gate:
            pair = literalize(sentence, verb, lit_config, registry)
        if pair is None:
            return {"pair": None, "reason": "no candidate survived symbol filtering"}
        return {"pair": pair_to_record(pair), "reason": None}

    @app.get("/health")
    def health():
        report = registry.health()
        if all(status == "ok" for status in report.values()):
            return {"status": "ok", "adapters": report}
        return JSONResponse(
            status_code=503, content={"status": "degraded", "adapters": report}
        )

    return app


def create_adapter_app(registry: AdapterRegistry) -> FastAPI:
    """Reference model server: one endpoint per adapter operation.

    Lets a registry (usually fakes) back the remote adapter protocol, which
    is how the HTTP clients are exercised without real model servers.
    """
    app = FastAPI(title="adapter backend")

    @app.exception_handler(InvalidInput)
    async def _on_invalid(request: Request, exc: InvalidInput):
        return _error(400, "invalid-input", str(exc))

    @app.exception_handler(AdapterError)
    async def _on_adapter(request: Request, exc: AdapterError):
        return _error(500, "adapter-failure", str(exc))

    @app.post("/predict_masked")
    def predict_masked(body: dict):
        preds = registry.masked_predictor.predict_masked(body["text"], body["n"])
        return {"predictions": [
            {"surface": p.surface, "prob": p.prob} for p in preds
        ]}

    @app.post("/score_verb")
    def score_verb(body: dict):
        from .core import Source, VerbOccurrence

        sentence = Sentence(
            id=body["sentence"]["id"],
            text=body["sentence"]["text"],
            source=Source(body["sentence"].get("source", "user")),
        )
        v = body["verb"]
        verb = VerbOccurrence(
            v["sentence_id"], v["token_index"], v["surface"], v["lemma"]
        )
        score = registry.verb_scorer.score_verb(sentence, verb)
        return {"p_metaphoric": score.p_metaphoric, "p_literal": score.p_literal}

    @app.post("/score_sentence")
    def score_sentence(body: dict):
        return {"score": registry.sentence_scorer.score_sentence(body["text"])}

    @app.post("/symbols_of")
    def symbols_of(body: dict):
        return {"beams": list(registry.symbolizer.symbols_of(body["text"]).beams)}

    @app.post("/embed")
    def embed(body: dict):
        return {"vector": registry.embedder.embed(body["text"]).tolist()}

    @app.post("/seq2seq_sample")
    def seq2seq_sample(body: dict):
        hyps = registry.seq2seq.sample(
            body["source"], body["k"], body["num_hypotheses"], body["seed"]
        )
        return {"hypotheses": [
            {"tokens": list(h.tokens), "token_logprobs": list(h.token_logprobs)}
            for h in hyps
        ]}

    @app.get("/health")
    def health():
        report = registry.health()
        if all(status == "ok" for status in report.values()):
            return {"status": "ok"}
        return JSONResponse(status_code=503, content={"status": "degraded"})

    return app
