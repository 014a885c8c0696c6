import json
from dataclasses import replace

import pytest

from metgen.adapters import FakeVerbScorer
from metgen.core import InvalidInput
from metgen.enhancer import (
    EnhanceResult,
    Quatrain,
    enhance_quatrain,
    pick_target,
    split_quatrains,
)
from metgen.generator import RescoringConfig

from oracles import brute_force_pick_target


@pytest.fixture(scope="module")
def poem_lines(fixtures_dir):
    return (fixtures_dir / "poem_8.txt").read_text().splitlines()


@pytest.fixture(scope="module")
def fixture_quatrains(fixtures_dir):
    data = json.loads((fixtures_dir / "quatrains.json").read_text())
    return [Quatrain(tuple(q["lines"]), source_poem_id=q["id"]) for q in data]


class TestSplitQuatrains:
    def test_exact_division(self, poem_lines):
        quatrains, dropped = split_quatrains(poem_lines)
        assert len(quatrains) == 2 and dropped == 0

    def test_short_poem(self):
        quatrains, dropped = split_quatrains(["one line", "two", "three"])
        assert quatrains == [] and dropped == 3

    def test_remainder_dropped_with_count(self, poem_lines):
        quatrains, dropped = split_quatrains(poem_lines + ["tail a", "tail b"])
        assert len(quatrains) == 2 and dropped == 2

    def test_blank_lines_skipped(self, poem_lines):
        spaced = poem_lines[:4] + ["", "   "] + poem_lines[4:]
        quatrains, dropped = split_quatrains(spaced)
        assert len(quatrains) == 2 and dropped == 0

    def test_flatten_identity(self, poem_lines):
        quatrains, _ = split_quatrains(poem_lines)
        flattened = [line for q in quatrains for line in q.lines]
        assert flattened == poem_lines

    def test_quatrain_validation(self):
        with pytest.raises(InvalidInput):
            Quatrain(("a", "b", "c"))
        with pytest.raises(InvalidInput):
            Quatrain(("a", "b", "c", " "))


class TestPickTarget:
    def test_most_literal_line_wins(self, registry, poem_lines):
        q = Quatrain(tuple(poem_lines[:4]))
        line_index, verb = pick_target(q, registry)
        assert line_index == 1
        assert verb.surface == "covered"

    def test_stop_verbs_only(self, registry):
        q = Quatrain((
            "it is what it is .",
            "they have what they have .",
            "it was a day .",
            "we were there .",
        ))
        assert pick_target(q, registry) is None

    def test_tie_prefers_earlier_line(self, registry):
        scorer = FakeVerbScorer(by_lemma={"walk": 0.3, "run": 0.3})
        tied = replace(registry, verb_scorer=scorer)
        q = Quatrain((
            "night night night",
            "she runs along the shore .",
            "he walks along the shore .",
            "night night night",
        ))
        line_index, verb = pick_target(q, tied)
        assert (line_index, verb.surface) == (1, "runs")

    def test_matches_brute_force_on_fixture_set(self, registry,
                                                fixture_quatrains):
        for q in fixture_quatrains:
            expected = brute_force_pick_target(q, registry)
            got = pick_target(q, registry)
            if expected is None:
                assert got is None, q.source_poem_id
            else:
                line_index, token_index, surface = expected
                assert got is not None, q.source_poem_id
                assert (got[0], got[1].token_index, got[1].surface) == \
                    (line_index, token_index, surface), q.source_poem_id


class TestEnhanceQuatrain:
    def test_golden_rewrite(self, registry, poem_lines):
        q = Quatrain(tuple(poem_lines[:4]))
        result = enhance_quatrain(q, RescoringConfig(lam=1.0, seed=7), registry)
        assert result.changed
        diff = result.diffs[0]
        assert diff.line_index == 1
        assert diff.verb_before == "covered"
        assert diff.verb_after == "wrapped"
        assert result.quatrain.lines[1] == \
            "And the valleys are wrapped with misty veils ,"
        assert result.quatrain.lines[0] == q.lines[0]

    def test_no_eligible_verb_unchanged(self, registry):
        q = Quatrain((
            "it is what it is .",
            "night night night",
            "it was a day .",
            "stars , stars , stars .",
        ))
        result = enhance_quatrain(q, RescoringConfig(seed=1), registry)
        assert result.quatrain == q and not result.changed

    def test_generation_failure_degrades_to_unchanged(self, registry):
        from metgen.adapters import BrokenAdapter

        broken = replace(registry, seq2seq=BrokenAdapter("decoder down"))
        q = Quatrain((
            "He walked to the market in the rain .",
            "night night night",
            "night night night",
            "night night night",
        ))
        result = enhance_quatrain(q, RescoringConfig(seed=1), broken)
        assert result.quatrain == q and not result.changed

    def test_at_most_one_line_changes_on_fixtures(self, registry,
                                                  fixture_quatrains):
        config = RescoringConfig(lam=1.0, seed=7)
        for q in fixture_quatrains:
            result = enhance_quatrain(q, config, registry)
            unchanged = [
                before == after
                for before, after in zip(q.lines, result.quatrain.lines)
            ]
            assert unchanged.count(False) <= 1, q.source_poem_id
            assert len(result.diffs) <= 1

    def test_stop_verbs_never_replaced(self, registry, fixture_quatrains):
        stop_surfaces = {"is", "was", "are", "were", "have", "had", "has"}
        config = RescoringConfig(lam=1.0, seed=7)
        for q in fixture_quatrains:
            result = enhance_quatrain(q, config, registry)
            for diff in result.diffs:
                assert diff.verb_before not in stop_surfaces
