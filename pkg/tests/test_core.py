import json

import pytest
from hypothesis import given, strategies as st

from metgen.core import (
    MASK_TOKEN,
    DecodedHypothesis,
    InvalidInput,
    LiteralMetaphorPair,
    MetaphoricityScore,
    PairParseError,
    RuleVerbTagger,
    Sentence,
    Source,
    SymbolBeamSet,
    extract_verbs,
    normalize_symbol,
    read_pairs,
    replace_token,
    tokenize,
    write_pairs,
)

TAGGER = RuleVerbTagger()


def sent(text: str) -> Sentence:
    return Sentence(id="s", text=text, source=Source.TEST)


class TestTokenize:
    def test_splits_punctuation(self):
        assert tokenize("The night, cold.") == ["The", "night", ",", "cold", "."]

    def test_mask_token_is_atomic(self):
        assert tokenize(f"a {MASK_TOKEN} b") == ["a", MASK_TOKEN, "b"]

    def test_internal_apostrophe_kept(self):
        assert tokenize("don't stop") == ["don't", "stop"]

    def test_replace_token_preserves_other_bytes(self):
        text = "The scream  filled the night ."
        assert replace_token(text, 2, MASK_TOKEN) == f"The scream  {MASK_TOKEN} the night ."

    def test_replace_token_out_of_range(self):
        with pytest.raises(InvalidInput):
            replace_token("one two", 5, "x")


class TestExtractVerbs:
    def test_single_verb(self):
        occ = extract_verbs(sent("The scream filled the night"), TAGGER)
        assert [(v.token_index, v.surface, v.lemma) for v in occ] == [
            (2, "filled", "fill")
        ]

    def test_no_verbs(self):
        assert extract_verbs(sent("night night night"), TAGGER) == []

    def test_two_verbs(self):
        occ = extract_verbs(sent("He runs and she walks"), TAGGER)
        assert [(v.token_index, v.surface) for v in occ] == [(1, "runs"), (4, "walks")]

    def test_modal_blocks_preceding_token(self):
        occ = extract_verbs(sent("The tax cut will help the economy"), TAGGER)
        assert [(v.token_index, v.surface) for v in occ] == [(4, "help")]

    def test_deterministic(self):
        s = sent("The grey clouds wept upon the barren field .")
        assert extract_verbs(s, TAGGER) == extract_verbs(s, TAGGER)

    def test_empty_text_rejected(self):
        with pytest.raises(InvalidInput):
            Sentence(id="x", text="   ")


class TestNormalizeSymbol:
    @pytest.mark.parametrize(
        "raw,expected",
        [(" Love ", "love"), ("DESPAIR", "despair"), ("loss  of hope", "loss of hope")],
    )
    def test_examples(self, raw, expected):
        assert normalize_symbol(raw) == expected

    @given(st.text(max_size=30))
    def test_idempotent(self, raw):
        assert normalize_symbol(normalize_symbol(raw)) == normalize_symbol(raw)


class TestTypes:
    def test_metaphoricity_must_sum_to_one(self):
        MetaphoricityScore(0.25, 0.75)
        with pytest.raises(InvalidInput):
            MetaphoricityScore(0.5, 0.6)

    @given(st.floats(min_value=0.0, max_value=1.0))
    def test_metaphoric_constructor(self, p):
        score = MetaphoricityScore.metaphoric(p)
        assert abs(score.p_metaphoric + score.p_literal - 1.0) <= 1e-9

    def test_beam_set_needs_five(self):
        with pytest.raises(InvalidInput):
            SymbolBeamSet(("a", "b", "c"))
        with pytest.raises(InvalidInput):
            SymbolBeamSet(("a", "a", "b", "c", "d"))
        with pytest.raises(InvalidInput):
            SymbolBeamSet(("A", "b", "c", "d", "e"))

    def test_hypothesis_rejects_positive_logprob(self):
        with pytest.raises(InvalidInput):
            DecodedHypothesis(("a",), (0.1,))

    def test_hypothesis_text(self):
        hyp = DecodedHypothesis(("The", "night", "."), (0.0, -0.5, 0.0))
        assert hyp.text == "The night ."

    def test_pair_must_differ_at_verb_only(self):
        symbols = SymbolBeamSet.of("a", "b", "c", "d", "e")
        with pytest.raises(InvalidInput):
            LiteralMetaphorPair(
                literal_text="one two three",
                metaphor_text="one other word",
                verb_token_index=1,
                symbols=symbols,
                literal_verb="two",
                metaphor_verb="other",
                p_literal_of_replacement=0.9,
            )


WORD = st.sampled_from(
    "night river shadow stone light grief hope walked surged filled held".split()
)


@st.composite
def pairs(draw):
    n = draw(st.integers(min_value=2, max_value=8))
    tokens = [draw(WORD) for _ in range(n)]
    index = draw(st.integers(min_value=0, max_value=n - 1))
    literal_verb = draw(WORD)
    metaphor_verb = draw(WORD.filter(lambda w: w != literal_verb))
    lit = list(tokens)
    met = list(tokens)
    lit[index] = literal_verb
    met[index] = metaphor_verb
    beams = draw(
        st.lists(
            st.sampled_from("love loss despair sorrow joy hope peace fear".split()),
            min_size=5, max_size=5, unique=True,
        )
    )
    return LiteralMetaphorPair(
        literal_text=" ".join(lit),
        metaphor_text=" ".join(met),
        verb_token_index=index,
        symbols=SymbolBeamSet(tuple(beams)),
        literal_verb=literal_verb,
        metaphor_verb=metaphor_verb,
        p_literal_of_replacement=draw(st.floats(min_value=0.0, max_value=1.0)),
    )


class TestPairIO:
    @given(st.lists(pairs(), max_size=10))
    def test_round_trip(self, tmp_path_factory, batch):
        path = tmp_path_factory.mktemp("pairs") / "pairs.jsonl"
        write_pairs(batch, path)
        assert list(read_pairs(path)) == batch

    def test_empty_file(self, tmp_path):
        path = tmp_path / "pairs.jsonl"
        path.write_text("")
        assert list(read_pairs(path)) == []

    def test_missing_field_reports_line(self, tmp_path):
        good = {
            "literal": "a walked b", "metaphor": "a surged b", "verb_index": 1,
            "literal_verb": "walked", "metaphor_verb": "surged",
            "symbols": ["a", "b", "c", "d", "e"], "p_literal": 0.9,
        }
        bad = {k: v for k, v in good.items() if k != "metaphor"}
        path = tmp_path / "pairs.jsonl"
        path.write_text(json.dumps(good) + "\n" + json.dumps(bad) + "\n")
        with pytest.raises(PairParseError) as err:
            list(read_pairs(path))
        assert err.value.line == 2

    def test_lf_and_utf8(self, tmp_path):
        path = tmp_path / "pairs.jsonl"
        pair = LiteralMetaphorPair(
            literal_text="la nuit walked",
            metaphor_text="la nuit surged",
            verb_token_index=2,
            symbols=SymbolBeamSet.of("amour", "nuit", "ombre", "mer", "ciel"),
            literal_verb="walked",
            metaphor_verb="surged",
            p_literal_of_replacement=0.5,
        )
        write_pairs([pair], path)
        raw = path.read_bytes()
        assert b"\r" not in raw
        assert "nuit" in raw.decode("utf-8")
