"""Pipeline orchestration: checkpoints, resume, gating, robustness."""

import json

import pytest

from vmx import graph as graph_store
from vmx import pipeline as pipeline_mod
from vmx import sampledata
from vmx.corpus import load_corpus
from vmx.gateway import Backend, GatewayConfig, ModelGateway, Script, ScriptRule, TemplateId
from vmx.pipeline import PipelineConfig, StageError, report, run_pipeline


def fresh_gateway(script=None):
    return ModelGateway(GatewayConfig(backend=Backend.SCRIPTED), script=script)


class TestFullRun:
    def test_graph_shape_and_accounting(self, sample_corpus, tmp_path):
        graph, run = run_pipeline(
            sample_corpus, fresh_gateway(), PipelineConfig(), run_dir=tmp_path / "run"
        )
        assert len(graph.outcome_clusters) == 2
        for cluster in graph.outcome_clusters:
            assert 1 <= len(cluster.approaches) <= 3
        assert run.videos_total == 24
        assert run.clustered + len(run.flags["outcomes"]) == run.videos_total
        summary = report(run)
        assert summary["excluded"]["outcomes"] == 0
        assert summary["call_counts"]["OUTCOME_SEGMENTS"] == 24
        assert summary["wall_time_s"] >= 0
        assert (tmp_path / "run" / "report.json").exists()

    def test_checkpoints_written_per_stage(self, sample_corpus, tmp_path):
        run_dir = tmp_path / "run"
        run_pipeline(sample_corpus, fresh_gateway(), PipelineConfig(), run_dir=run_dir)
        for stage in pipeline_mod.STAGES:
            assert (run_dir / f"{stage}.json").exists()

    def test_graph_report_has_no_wall_time(self, sample_corpus, tmp_path):
        graph, _ = run_pipeline(
            sample_corpus, fresh_gateway(), PipelineConfig(), run_dir=tmp_path / "run"
        )
        assert "wall_time_s" not in json.dumps(graph_store.to_dict(graph))


class TestResume:
    def test_interrupted_run_resumes_to_identical_graph(self, sample_corpus, tmp_path):
        full_graph, _ = run_pipeline(
            sample_corpus, fresh_gateway(), PipelineConfig(), run_dir=tmp_path / "full"
        )
        # simulate a run killed after the dai stage
        partial_dir = tmp_path / "partial"
        run_pipeline(
            sample_corpus,
            fresh_gateway(),
            PipelineConfig(stages=("outcomes", "dai")),
            run_dir=partial_dir,
        )
        resumed_graph, resumed = run_pipeline(
            sample_corpus, fresh_gateway(), PipelineConfig(), run_dir=partial_dir
        )
        assert resumed.stages_resumed == ["outcomes", "dai"]
        assert graph_store.canonical_bytes(resumed_graph) == graph_store.canonical_bytes(
            full_graph
        )

    def test_completed_stage_rerun_changes_nothing(self, sample_corpus, tmp_path):
        run_dir = tmp_path / "run"
        first, _ = run_pipeline(sample_corpus, fresh_gateway(), PipelineConfig(), run_dir=run_dir)
        second, run2 = run_pipeline(
            sample_corpus, fresh_gateway(), PipelineConfig(), run_dir=run_dir
        )
        assert run2.stages_run == []
        assert graph_store.canonical_bytes(first) == graph_store.canonical_bytes(second)

    def test_fingerprint_mismatch_recomputes(self, sample_corpus, tmp_path):
        run_dir = tmp_path / "run"
        run_pipeline(sample_corpus, fresh_gateway(), PipelineConfig(seed=1), run_dir=run_dir)
        _, run2 = run_pipeline(
            sample_corpus, fresh_gateway(), PipelineConfig(seed=2), run_dir=run_dir
        )
        assert run2.stages_resumed == []


class TestGating:
    def test_outcomes_only(self, sample_corpus, tmp_path):
        graph, _ = run_pipeline(
            sample_corpus,
            fresh_gateway(),
            PipelineConfig(stages=("outcomes",)),
            run_dir=tmp_path / "run",
        )
        assert len(graph.outcome_clusters) == 2
        assert all(c.approaches == [] for c in graph.outcome_clusters)


class TestRobustness:
    def test_one_poisoned_video_of_six_is_excluded(self, tmp_path):
        manifest = sampledata.write_corpus(sampledata.small_plans(), tmp_path / "corpus")
        corpus = load_corpus(manifest)
        assert len(corpus) == 6
        script = Script(
            rules=[
                ScriptRule(
                    template_id=TemplateId.OUTCOME_SEGMENTS,
                    contains="video r03",
                    payload={"index": "always invalid"},
                )
            ]
        )
        graph, run = run_pipeline(
            corpus, fresh_gateway(script), PipelineConfig(), run_dir=tmp_path / "run"
        )
        assert run.flags["outcomes"] == {"r03": "no_outcome"}
        clustered = {
            vid for c in graph.outcome_clusters for a in c.approaches
            for vid in a.supporting_video_ids
        }
        assert "r03" not in clustered
        members = {
            vid
            for c in graph.outcome_clusters
            for vid in graph.pipeline_report["flags"]["outcomes"]
        }
        assert members == {"r03"}
        assert run.clustered == 5
        assert report(run)["excluded"]["outcomes"] == 1

    def test_stage_failure_raises_stage_error(self, sample_corpus, tmp_path):
        script = Script(
            rules=[
                ScriptRule(
                    template_id=TemplateId.OUTCOME_CLUSTER,
                    payload={"clusters": ["way", "too", "many", "names", "here"]},
                )
            ]
        )
        with pytest.raises(StageError) as err:
            run_pipeline(
                sample_corpus, fresh_gateway(script), PipelineConfig(), run_dir=tmp_path / "run"
            )
        assert err.value.stage == "outcomes"
