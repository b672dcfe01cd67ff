"""Method variation clustering, span assignment, tips and clip summaries."""

from vmx.corpus import Corpus
from vmx.dai import StepSpan
from vmx.gateway import Script, ScriptRule, TemplateId
from vmx.methods import (
    FLAG_METHOD_FALLBACK,
    assign_method,
    build_step_methods,
    cluster_methods,
    extract_tips,
    summarize_clip,
)

from helpers import make_video


def boil_video(video_id, method, tip=None):
    tip_tag = f" [TIP:{tip}]" if tip else ""
    texts = [
        "Welcome to the kitchen.",
        f"Let us boil these potatoes now. [STEP:Boil Potatoes] [METHOD:{method}]",
        f"Keep them going until soft. [STEP:Boil Potatoes]{tip_tag}",
        "All done, thanks.",
    ]
    return make_video(video_id, texts)


def span_for(video, start=1, end=2, step="Boil Potatoes"):
    return StepSpan(
        video_id=video.video_id,
        step_name=step,
        sentence_start=start,
        sentence_end=end,
        start_s=video.sentences[start].start_s,
        end_s=video.sentences[end].end_s,
    )


def corpus_of(*videos):
    return Corpus(task_name=videos[0].task_name, videos={v.video_id: v for v in videos})


class TestClusterMethods:
    def test_variations_found_across_videos(self, gateway):
        videos = [
            boil_video("v1", "Boiling using stove"),
            boil_video("v2", "Boiling using oven"),
            boil_video("v3", "Boiling using microwave"),
        ]
        spans = [span_for(v) for v in videos]
        names = cluster_methods(gateway, "Make Gnocchi", "Boil Potatoes", spans, corpus_of(*videos))
        assert names == ["Boiling using stove", "Boiling using oven", "Boiling using microwave"]

    def test_single_span_single_cluster(self, gateway):
        video = boil_video("v1", "Boiling using stove")
        names = cluster_methods(
            gateway, "Make Gnocchi", "Boil Potatoes", [span_for(video)], corpus_of(video)
        )
        assert names == ["Boiling using stove"]

    def test_schema_failure_falls_back_to_step_name(self, make_gateway):
        script = Script(
            rules=[
                ScriptRule(
                    template_id=TemplateId.METHOD_CLUSTER,
                    payload={"clusters": ["a", "b", "c", "d"]},
                )
            ]
        )
        gw = make_gateway(script)
        video = boil_video("v1", "Boiling using stove")
        names = cluster_methods(
            gw, "Make Gnocchi", "Boil Potatoes", [span_for(video)], corpus_of(video)
        )
        assert names == ["Boil Potatoes"]


class TestAssignMethod:
    def test_span_lands_in_its_tagged_cluster(self, gateway):
        videos = [boil_video("v1", "Boiling using stove"), boil_video("v2", "Boiling using oven")]
        corpus = corpus_of(*videos)
        names = ["Boiling using stove", "Boiling using oven"]
        assert (
            assign_method(gateway, "t", "Boil Potatoes", span_for(videos[1]), corpus, names)
            == "Boiling using oven"
        )

    def test_single_cluster_short_circuits(self, gateway):
        video = boil_video("v1", "Boiling using stove")
        got = assign_method(
            gateway, "t", "Boil Potatoes", span_for(video), corpus_of(video), ["Only"]
        )
        assert got == "Only"
        assert gateway.call_counts == {}

    def test_out_of_enum_returns_none(self, make_gateway):
        script = Script(
            rules=[
                ScriptRule(
                    template_id=TemplateId.METHOD_ASSIGN,
                    payload={"method": "Something Else"},
                )
            ]
        )
        gw = make_gateway(script)
        video = boil_video("v1", "Boiling using stove")
        got = assign_method(
            gw, "t", "Boil Potatoes", span_for(video), corpus_of(video), ["A", "B"]
        )
        assert got is None


class TestTips:
    def test_repeated_tip_grounded_in_multiple_videos(self, gateway):
        videos = [
            boil_video("v1", "Boiling using stove", tip="Add vegetables first"),
            boil_video("v2", "Boiling using stove", tip="Add vegetables first"),
            boil_video("v3", "Boiling using stove"),
        ]
        spans = [span_for(v) for v in videos]
        tips = extract_tips(gateway, "t", "Boil Potatoes", spans, corpus_of(*videos))
        assert len(tips) == 1
        assert tips[0].text == "Add vegetables first"
        assert {g.video_id for g in tips[0].groundings} == {"v1", "v2"}
        for g in tips[0].groundings:
            assert 1 <= g.sentence_start <= g.sentence_end <= 2

    def test_no_advice_yields_no_tips(self, gateway):
        videos = [boil_video("v1", "Boiling using stove")]
        tips = extract_tips(gateway, "t", "Boil Potatoes", [span_for(videos[0])], corpus_of(*videos))
        assert tips == []

    def test_adversarial_groundings_clipped_or_dropped(self, make_gateway):
        script = Script(
            rules=[
                ScriptRule(
                    template_id=TemplateId.TIPS,
                    payload={
                        "tips": [
                            {
                                "tip": "partially outside",
                                "videos": [
                                    {"video_id": "v1", "start_index": 0, "end_index": 9}
                                ],
                            },
                            {
                                "tip": "fully outside",
                                "videos": [
                                    {"video_id": "v1", "start_index": 3, "end_index": 9}
                                ],
                            },
                            {
                                "tip": "unknown video",
                                "videos": [
                                    {"video_id": "zz", "start_index": 1, "end_index": 2}
                                ],
                            },
                        ]
                    },
                )
            ]
        )
        gw = make_gateway(script)
        video = boil_video("v1", "Boiling using stove")
        spans = [span_for(video, start=1, end=2)]
        tips = extract_tips(gw, "t", "Boil Potatoes", spans, corpus_of(video))
        assert [t.text for t in tips] == ["partially outside"]
        g = tips[0].groundings[0]
        assert (g.sentence_start, g.sentence_end) == (1, 2)

    def test_at_most_three_tips(self, gateway):
        videos = [
            boil_video(f"v{i}", "Boiling using stove", tip=f"tip number {i}") for i in range(5)
        ]
        spans = [span_for(v) for v in videos]
        tips = extract_tips(gateway, "t", "Boil Potatoes", spans, corpus_of(*videos))
        assert len(tips) <= 3


class TestSummaries:
    def test_scripted_summary(self, gateway):
        video = make_video(
            "v1",
            [
                "intro",
                "Applying glue along the joint. [STEP:Glue Joint] "
                "[SUMMARY:Applies wood glue along the joint before clamping.]",
                "clamp it down [STEP:Glue Joint]",
            ],
        )
        span = span_for(video, start=1, end=2, step="Glue Joint")
        got = summarize_clip(gateway, span, corpus_of(video))
        assert got == "Applies wood glue along the joint before clamping."

    def test_fallback_is_first_sentence_truncated(self, make_gateway):
        script = Script(
            rules=[ScriptRule(template_id=TemplateId.CLIP_SUMMARY, payload="")]
        )
        gw = make_gateway(script)
        long_text = "word " * 60
        video = make_video("v1", ["intro", long_text.strip(), "more"])
        span = span_for(video, start=1, end=2, step="S")
        got = summarize_clip(gw, span, corpus_of(video))
        assert got == long_text.strip()[:120]
        assert len(got) <= 120


class TestBuildStepMethods:
    def test_partition_of_spans(self, gateway):
        videos = [
            boil_video("v1", "Boiling using stove"),
            boil_video("v2", "Boiling using oven"),
            boil_video("v3", "Boiling using stove"),
        ]
        spans = [span_for(v) for v in videos]
        sm = build_step_methods(gateway, "t", "Boil Potatoes", spans, corpus_of(*videos))
        placed = [
            (s.video_id, s.sentence_start) for c in sm.clusters for s in c.member_spans
        ]
        assert sorted(placed) == sorted((s.video_id, s.sentence_start) for s in spans)
        assert len(placed) == len(set(placed))
        assert 1 <= len(sm.clusters) <= 3
        for cluster in sm.clusters:
            for span in cluster.member_spans:
                key = (span.video_id, span.sentence_start, span.sentence_end)
                assert cluster.clip_summaries[key]

    def test_unassignable_span_joins_largest_cluster_with_flag(self, make_gateway):
        script = Script(
            rules=[
                ScriptRule(
                    template_id=TemplateId.METHOD_ASSIGN,
                    contains="video_id_v3_marker",
                    payload={"method": "Nope"},
                )
            ]
        )
        gw = make_gateway(script)
        videos = [
            boil_video("v1", "Boiling using stove"),
            boil_video("v2", "Boiling using stove"),
            boil_video("v4", "Boiling using oven"),
        ]
        bad = make_video(
            "v3",
            [
                "x",
                "talking about video_id_v3_marker here [STEP:Boil Potatoes]",
                "still going [STEP:Boil Potatoes]",
            ],
        )
        videos.append(bad)
        corpus = corpus_of(*videos)
        spans = [span_for(v) for v in videos]
        sm = build_step_methods(gw, "t", "Boil Potatoes", spans, corpus)
        stove = next(c for c in sm.clusters if c.name == "Boiling using stove")
        assert any(s.video_id == "v3" for s in stove.member_spans)
        assert sm.flags == {"v3:1": FLAG_METHOD_FALLBACK}
