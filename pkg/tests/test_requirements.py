"""Requirement extraction, normalization and frequency tallies."""

from hypothesis import given, settings
from hypothesis import strategies as st

from vmx.requirements import (
    ItemKind,
    RequirementSet,
    extract_requirements,
    merge_key,
    normalize_entry,
    shade_bucket,
    tally_requirements,
)

from helpers import make_video
from oracles import oracle_recount


class TestExtraction:
    def test_pinch_of_salt_becomes_salt(self, gateway):
        video = make_video(
            "v1",
            [
                "Welcome back to the kitchen.",
                "Now add a pinch of salt to the water. [ITEM:ingredient:salt]",
                "And bring it to a boil. [ITEM:tool:pot]",
            ],
        )
        req = extract_requirements(gateway, video)
        assert "salt" in req.ingredients
        assert "pinch of salt" not in req.ingredients

    def test_tools_and_ingredients_split(self, gateway):
        video = make_video(
            "v1",
            [
                "Grab the drill. [ITEM:tool:drill]",
                "And some wood glue. [ITEM:tool:wood glue]",
                "Plus two boards. [ITEM:ingredient:pine boards]",
            ],
        )
        req = extract_requirements(gateway, video)
        assert set(req.tools) >= {"drill", "wood glue"}
        assert req.ingredients == ["pine boards"]

    def test_nothing_narrated_is_empty(self, gateway):
        video = make_video("v1", ["no items here", "really none"])
        req = extract_requirements(gateway, video)
        assert req.ingredients == [] and req.tools == []

    def test_entries_are_normalized_and_deduplicated(self, gateway):
        video = make_video(
            "v1",
            [
                "Flour time. [ITEM:ingredient:Flour] [ITEM:ingredient:  flour ]",
            ],
        )
        req = extract_requirements(gateway, video)
        assert req.ingredients == ["flour"]


class TestTally:
    def _sets(self, raw):
        return [
            RequirementSet(video_id=vid, ingredients=list(ing), tools=list(tools))
            for vid, ing, tools in raw
        ]

    def test_unanimous_item(self):
        sets = self._sets(
            [("v1", ["salt"], []), ("v2", ["salt"], []), ("v3", ["salt"], [])]
        )
        tally = tally_requirements(sets, {"v1", "v2", "v3"})
        assert len(tally.items) == 1
        item = tally.items[0]
        assert (item.name, item.kind, item.count, item.fraction) == (
            "salt", ItemKind.INGREDIENT, 3, 1.0,
        )

    def test_plural_variants_merge(self):
        sets = self._sets([("v1", [], ["screw"]), ("v2", [], ["screws"])])
        tally = tally_requirements(sets, {"v1", "v2"})
        assert len(tally.items) == 1
        assert tally.items[0].name == "screw"
        assert tally.items[0].count == 2

    def test_empty_supporting_set(self):
        tally = tally_requirements(self._sets([("v1", ["x"], [])]), set())
        assert tally.items == []

    def test_sets_outside_supporting_ids_ignored(self):
        sets = self._sets([("v1", ["salt"], []), ("v9", ["pepper"], [])])
        tally = tally_requirements(sets, {"v1"})
        assert [i.name for i in tally.items] == ["salt"]

    def test_sorted_by_count_then_name(self):
        sets = self._sets(
            [
                ("v1", ["salt", "flour"], ["pot"]),
                ("v2", ["salt"], ["pot"]),
                ("v3", ["flour", "salt"], []),
            ]
        )
        tally = tally_requirements(sets, {"v1", "v2", "v3"})
        names = [i.name for i in tally.items]
        counts = [i.count for i in tally.items]
        assert counts == sorted(counts, reverse=True)
        assert names == ["salt", "flour", "pot"]

    def test_recount_oracle_on_fixture_corpus(self, gateway, sample_corpus):
        raw = []
        sets = []
        for video in sample_corpus.ordered():
            req = extract_requirements(gateway, video)
            sets.append(req)
            raw.append((video.video_id, list(req.ingredients), list(req.tools)))
        supporting = {v.video_id for v in sample_corpus.ordered() if v.video_id.startswith("a")}
        tally = tally_requirements(sets, supporting)
        expected = oracle_recount(raw, supporting)
        got = {(merge_key(i.name), i.kind.value): i.count for i in tally.items}
        assert got == expected
        for item in tally.items:
            assert 1 <= item.count <= len(supporting)
            assert 0.0 < item.fraction <= 1.0


class TestNormalization:
    def test_examples(self):
        assert normalize_entry("  Wood   Glue ") == "wood glue"
        assert merge_key("Screws") == "screw"
        assert merge_key("glass") == "glass"
        assert merge_key("gas") == "gas"
        assert merge_key("eggs") == "egg"

    @settings(max_examples=100, deadline=None)
    @given(st.text(max_size=30))
    def test_normalize_idempotent(self, text):
        once = normalize_entry(text)
        assert normalize_entry(once) == once

    @settings(max_examples=100, deadline=None)
    @given(st.text(max_size=30))
    def test_merge_key_idempotent(self, text):
        once = merge_key(text)
        assert merge_key(once) == once


def test_shade_buckets():
    assert shade_bucket(1.0) == "dark"
    assert shade_bucket(0.75) == "dark"
    assert shade_bucket(0.5) == "medium"
    assert shade_bucket(0.4) == "medium"
    assert shade_bucket(0.39) == "light"
    assert shade_bucket(0.0) == "light"
