import itertools
import math
import socket
import threading
import time

import numpy as np
import pytest
from hypothesis import given, strategies as st

from metgen.adapters import (
    BrokenAdapter,
    FakeEmbedder,
    FakeMaskedPredictor,
    FakeSentenceScorer,
    FakeSeq2Seq,
    FakeSymbolizer,
    FakeVerbScorer,
    builtin_registry,
    load_registry,
)
from metgen.core import AdapterError, InvalidInput, Sentence, VerbOccurrence, tokenize

SOUL = "The turbulent feelings that surged through his soul ."
SOUL_MASKED = "The turbulent feelings that [MASK] through his soul ."


def soul_with(verb: str) -> tuple[Sentence, VerbOccurrence]:
    text = SOUL.replace("surged", verb)
    sentence = Sentence(id="t", text=text)
    return sentence, VerbOccurrence("t", 4, verb, verb[:-2] if False else None)


class TestMaskedPredictor:
    def test_table_entry_order(self, registry):
        preds = registry.masked_predictor.predict_masked(SOUL_MASKED, 3)
        assert [(p.surface, p.prob) for p in preds] == [
            ("tore", 0.11), ("ran", 0.1), ("ripped", 0.09)
        ]

    def test_sorted_descending_and_prefix_truncation(self, registry):
        full = registry.masked_predictor.predict_masked(SOUL_MASKED, 200)
        probs = [p.prob for p in full]
        assert probs == sorted(probs, reverse=True)
        head = registry.masked_predictor.predict_masked(SOUL_MASKED, 4)
        assert head == full[:4]

    def test_n_zero_rejected(self, registry):
        with pytest.raises(InvalidInput):
            registry.masked_predictor.predict_masked(SOUL_MASKED, 0)

    def test_mask_slot_count_enforced(self, registry):
        with pytest.raises(InvalidInput):
            registry.masked_predictor.predict_masked("no mask here", 5)
        with pytest.raises(InvalidInput):
            registry.masked_predictor.predict_masked("[MASK] and [MASK]", 5)

    def test_fallback_deterministic(self):
        predictor = FakeMaskedPredictor(vocabulary=["walked", "surged", "sang"])
        a = predictor.predict_masked("He [MASK] home", 3)
        b = predictor.predict_masked("He [MASK] home", 3)
        assert a == b
        assert len(a) == 3

    def test_batch_matches_elementwise(self, registry):
        texts = [SOUL_MASKED, "He [MASK] home"]
        batch = registry.masked_predictor.predict_masked_batch(texts, 5)
        assert batch == [
            registry.masked_predictor.predict_masked(t, 5) for t in texts
        ]


class TestVerbScorer:
    @pytest.mark.parametrize("verb,lemma,expected", [
        ("kicked", "kick", 0.99),
        ("continued", "continue", 0.0008),
        ("spread", "spread", 0.0004),
        ("eased", "ease", 0.12),
    ])
    def test_table_scores_in_context(self, registry, verb, lemma, expected):
        text = SOUL.replace("surged", verb)
        sentence = Sentence(id="t", text=text)
        occ = VerbOccurrence("t", 4, verb, lemma)
        score = registry.verb_scorer.score_verb(sentence, occ)
        assert score.p_metaphoric == pytest.approx(expected)

    def test_softmax_pair(self, registry):
        sentence = Sentence(id="t", text=SOUL)
        occ = VerbOccurrence("t", 4, "surged", "surge")
        score = registry.verb_scorer.score_verb(sentence, occ)
        assert score.p_metaphoric + score.p_literal == pytest.approx(1.0, abs=1e-9)

    def test_out_of_range_verb(self, registry):
        sentence = Sentence(id="t", text="short text")
        with pytest.raises(InvalidInput):
            registry.verb_scorer.score_verb(
                sentence, VerbOccurrence("t", 9, "x", "x")
            )

    def test_surface_mismatch(self, registry):
        sentence = Sentence(id="t", text="He walked home")
        with pytest.raises(InvalidInput):
            registry.verb_scorer.score_verb(
                sentence, VerbOccurrence("t", 1, "ran", "run")
            )

    def test_hash_fallback_is_stable(self):
        scorer = FakeVerbScorer(by_lemma={}, fallback="hash")
        sentence = Sentence(id="t", text="He zorbed home")
        occ = VerbOccurrence("t", 1, "zorbed", "zorb")
        assert scorer.score_verb(sentence, occ) == scorer.score_verb(sentence, occ)


class TestSentenceScorer:
    def test_listed_metaphoric_verb(self, registry):
        assert registry.sentence_scorer.score_sentence(SOUL) == 0.9

    def test_no_verbs(self, registry):
        assert registry.sentence_scorer.score_sentence("night night night") == 0.0

    def test_only_literal_verbs(self, registry):
        assert registry.sentence_scorer.score_sentence("He walked home") == 0.1

    def test_deterministic(self, registry):
        assert registry.sentence_scorer.score_sentence(SOUL) == \
            registry.sentence_scorer.score_sentence(SOUL)


class TestSymbolizer:
    def test_table_three_input(self, registry):
        beams = registry.symbolizer.symbols_of(SOUL)
        assert beams.beams == ("love", "loss", "despair", "sorrow", "loneliness")

    def test_table_three_eased(self, registry):
        beams = registry.symbolizer.symbols_of(SOUL.replace("surged", "eased"))
        assert beams.beams == ("peace", "love", "happiness", "joy", "hope")

    def test_unknown_verb_is_adapter_error(self, registry):
        with pytest.raises(AdapterError):
            registry.symbolizer.symbols_of("night night night")

    def test_short_beam_list_is_adapter_error(self):
        symbolizer = FakeSymbolizer(by_lemma={"walk": ["a", "b"]})
        with pytest.raises(AdapterError):
            symbolizer.symbols_of("He walked home")

    def test_deterministic(self, registry):
        assert registry.symbolizer.symbols_of(SOUL) == \
            registry.symbolizer.symbols_of(SOUL)


class TestEmbedder:
    @given(st.text(alphabet="abcdefg ", min_size=1).filter(str.strip))
    def test_unit_norm(self, text):
        embedder = FakeEmbedder(dim=16)
        assert np.linalg.norm(embedder.embed(text)) == pytest.approx(1.0, abs=1e-6)

    def test_identical_texts_identical_vectors(self):
        embedder = FakeEmbedder(dim=16)
        assert np.array_equal(embedder.embed("the night"), embedder.embed("the night"))

    def test_reproducible_across_instances(self):
        a = FakeEmbedder(dim=32).embed("the night")
        b = FakeEmbedder(dim=32).embed("the night")
        assert np.array_equal(a, b)

    def test_pinned_vectors_are_normalized(self):
        embedder = FakeEmbedder(dim=2, table={"a": [3.0, 4.0]})
        vec = embedder.embed("a")
        assert vec == pytest.approx([0.6, 0.8])


class TestSeq2Seq:
    def test_greedy_single_path(self):
        model = FakeSeq2Seq(models={"x": [{"The": 1.0}, {"night": 1.0}]})
        hyps = model.sample("x", k=1, num_hypotheses=3, seed=0)
        assert len(hyps) == 3
        for hyp in hyps:
            assert hyp.tokens == ("The", "night")
            assert hyp.token_logprobs == (0.0, 0.0)

    def test_greedy_is_seed_independent(self):
        model = FakeSeq2Seq(
            models={"x": [{"a": 0.6, "b": 0.4}, {"c": 0.9, "d": 0.1}]}
        )
        first = model.sample("x", k=1, num_hypotheses=5, seed=1)
        second = model.sample("x", k=1, num_hypotheses=5, seed=99)
        assert first == second
        assert all(h.tokens == ("a", "c") for h in first)

    def test_two_equiprobable_verbs_reproducible_multiset(self):
        model = FakeSeq2Seq(
            models={"x": [{"He": 1.0}, {"surged": 0.5, "walked": 0.5}]}
        )
        runs = [model.sample("x", k=5, num_hypotheses=10, seed=7) for _ in range(2)]
        assert runs[0] == runs[1]
        support = {("He", "surged"), ("He", "walked")}
        sampled = {h.tokens for h in runs[0]}
        assert sampled <= support
        # brute-force enumeration of the model distribution fixes the logprobs
        for hyp in runs[0]:
            assert hyp.token_logprobs[0] == 0.0
            assert hyp.token_logprobs[1] == pytest.approx(math.log(0.5))

    def test_tokens_never_leave_top_k(self):
        step = {"a": 0.3, "b": 0.25, "c": 0.2, "d": 0.15, "e": 0.06, "f": 0.04}
        model = FakeSeq2Seq(models={"x": [step, step]})
        top3 = {t for t, _ in FakeSeq2Seq.top_k_support(step, 3)}
        for hyp in model.sample("x", k=3, num_hypotheses=50, seed=3):
            assert set(hyp.tokens) <= top3

    def test_echo_fallback(self):
        model = FakeSeq2Seq()
        hyps = model.sample("over the hills", k=5, num_hypotheses=2, seed=0)
        assert all(h.tokens == ("over", "the", "hills") for h in hyps)

    def test_invalid_args(self, registry):
        with pytest.raises(InvalidInput):
            registry.seq2seq.sample("x", k=0, num_hypotheses=1, seed=0)
        with pytest.raises(InvalidInput):
            registry.seq2seq.sample("x", k=1, num_hypotheses=0, seed=0)

    @given(
        st.lists(
            st.dictionaries(
                st.sampled_from("abcdef"),
                st.floats(min_value=0.01, max_value=1.0),
                min_size=1, max_size=6,
            ),
            min_size=1, max_size=4,
        ),
        st.integers(min_value=1, max_value=4),
        st.integers(min_value=0, max_value=2**31),
    )
    def test_property_samples_within_top_k(self, steps, k, seed):
        model = FakeSeq2Seq(models={"x": steps})
        normalized = model.steps_for("x")
        supports = [
            {t for t, _ in FakeSeq2Seq.top_k_support(step, k)} for step in normalized
        ]
        for hyp in model.sample("x", k=k, num_hypotheses=5, seed=seed):
            assert all(tok in supports[i] for i, tok in enumerate(hyp.tokens))
            for i, (tok, lp) in enumerate(zip(hyp.tokens, hyp.token_logprobs)):
                assert lp == pytest.approx(
                    math.log(normalized[i][tok]) if normalized[i][tok] < 1.0 else 0.0
                )


class TestBrokenAdapter:
    def test_everything_fails(self):
        broken = BrokenAdapter()
        with pytest.raises(AdapterError):
            broken.health()
        with pytest.raises(AdapterError):
            broken.score_sentence("text")

    def test_registry_health_reports_broken_slot(self, registry):
        from dataclasses import replace

        degraded = replace(registry, symbolizer=BrokenAdapter("symbolizer down"))
        report = degraded.health()
        assert report["symbolizer"] == "symbolizer down"
        assert report["verb_scorer"] == "ok"


class TestRegistryConfig:
    def test_env_override(self, tmp_path, monkeypatch):
        config = tmp_path / "adapters.json"
        config.write_text(
            '{"masked_predictor": "builtin", "verb_scorer": "builtin",'
            ' "sentence_scorer": "builtin", "symbolizer": "builtin",'
            ' "embedder": "builtin", "seq2seq": "builtin"}'
        )
        monkeypatch.setenv("METGEN_ADAPTER_EMBEDDER", "fake:")
        registry = load_registry(config)
        assert registry.embedder.dim == 64

    def test_unknown_slot_rejected(self, tmp_path):
        config = tmp_path / "adapters.json"
        config.write_text('{"mystery": "builtin"}')
        from metgen.core import InvalidConfig

        with pytest.raises(InvalidConfig):
            load_registry(config)


@pytest.fixture(scope="module")
def adapter_server():
    import uvicorn

    from metgen.service import create_adapter_app

    app = create_adapter_app(builtin_registry())
    with socket.socket() as probe:
        probe.bind(("127.0.0.1", 0))
        port = probe.getsockname()[1]
    config = uvicorn.Config(app, host="127.0.0.1", port=port, log_level="error")
    server = uvicorn.Server(config)
    thread = threading.Thread(target=server.run, daemon=True)
    thread.start()
    deadline = time.monotonic() + 10
    while not server.started:
        if time.monotonic() > deadline:
            raise RuntimeError("adapter server did not start")
        time.sleep(0.02)
    yield f"http://127.0.0.1:{port}"
    server.should_exit = True
    thread.join(timeout=5)


class TestRemoteProtocol:
    def test_remote_matches_fakes(self, adapter_server, registry):
        from metgen.adapters.remote import (
            RemoteMaskedPredictor,
            RemoteSentenceScorer,
            RemoteSeq2Seq,
            RemoteSymbolizer,
            RemoteVerbScorer,
        )

        masked = RemoteMaskedPredictor(adapter_server)
        assert masked.predict_masked(SOUL_MASKED, 3) == \
            registry.masked_predictor.predict_masked(SOUL_MASKED, 3)

        scorer = RemoteVerbScorer(adapter_server)
        sentence = Sentence(id="t", text=SOUL)
        occ = VerbOccurrence("t", 4, "surged", "surge")
        assert scorer.score_verb(sentence, occ) == \
            registry.verb_scorer.score_verb(sentence, occ)

        assert RemoteSentenceScorer(adapter_server).score_sentence(SOUL) == 0.9
        assert RemoteSymbolizer(adapter_server).symbols_of(SOUL) == \
            registry.symbolizer.symbols_of(SOUL)
        remote_hyps = RemoteSeq2Seq(adapter_server).sample(SOUL, 5, 4, seed=11)
        assert remote_hyps == registry.seq2seq.sample(SOUL, 5, 4, seed=11)

    def test_remote_health_and_errors(self, adapter_server):
        from metgen.adapters.remote import RemoteSymbolizer

        symbolizer = RemoteSymbolizer(adapter_server)
        symbolizer.health()
        with pytest.raises(AdapterError):
            symbolizer.symbols_of("night night night")

    def test_unreachable_backend(self):
        from metgen.adapters.remote import RemoteSentenceScorer

        dead = RemoteSentenceScorer("http://127.0.0.1:1", timeout=0.2)
        with pytest.raises(AdapterError):
            dead.health()


class TestBatchedVariants:
    def test_verb_scorer_batch(self, registry):
        sentence = Sentence(id="t", text=SOUL)
        items = [(sentence, VerbOccurrence("t", 4, "surged", "surge"))] * 2
        assert registry.verb_scorer.score_verbs_batch(items) == [
            registry.verb_scorer.score_verb(*items[0]),
            registry.verb_scorer.score_verb(*items[1]),
        ]

    def test_sentence_scorer_batch(self, registry):
        texts = [SOUL, "He walked home", "night night night"]
        assert registry.sentence_scorer.score_sentences_batch(texts) == [
            registry.sentence_scorer.score_sentence(t) for t in texts
        ]

    def test_symbolizer_batch(self, registry):
        texts = [SOUL, SOUL.replace("surged", "eased")]
        assert registry.symbolizer.symbols_of_batch(texts) == [
            registry.symbolizer.symbols_of(t) for t in texts
        ]

    def test_embedder_batch(self, registry):
        import numpy as np

        texts = ["the night", "a river"]
        batch = registry.embedder.embed_batch(texts)
        for got, text in zip(batch, texts):
            assert np.array_equal(got, registry.embedder.embed(text))

    def test_seq2seq_batch(self, registry):
        sources = [SOUL, "He walked home"]
        assert registry.seq2seq.sample_batch(sources, 5, 3, seed=2) == [
            registry.seq2seq.sample(s, 5, 3, seed=2) for s in sources
        ]
