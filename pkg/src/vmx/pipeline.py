"""End-to-end pipeline: outcomes -> DAI -> requirements -> methods.

Stages run in a fixed order with a JSON checkpoint written after each
one under the run directory, so an interrupted run resumes from the last
completed stage and reproduces the exact graph an uninterrupted run
would have produced.  Per-stage model-call counts are recorded in the
checkpoints (not read back from the live gateway) for the same reason.
"""

from __future__ import annotations

import json
import logging
import time
from dataclasses import dataclass, field
from pathlib import Path

from . import graph as graph_store
from .corpus import Corpus
from .dai import Approach, ApproachKind, CanonicalSequence, DaiResult, StepSpan, run_dai
from .gateway import ModelGateway, SchemaError
from .methods import MethodCluster, StepMethods, Tip, TipGrounding, build_step_methods
from .outcomes import OutcomeCluster, OutcomeStage, run_outcome_stage
from .requirements import (
    FLAG_NO_REQUIREMENTS,
    ItemKind,
    RequirementSet,
    RequirementTally,
    TallyItem,
    extract_requirements,
    tally_requirements,
)
from .corpus import FrameAsset

log = logging.getLogger(__name__)

STAGES = ("outcomes", "dai", "requirements", "methods")


class StageError(Exception):
    """A stage failed; completed checkpoints stay on disk for resume."""

    def __init__(self, stage: str, cause: Exception, run_dir: Path):
        super().__init__(f"stage {stage!r} failed: {cause}")
        self.stage = stage
        self.cause = cause
        self.run_dir = run_dir


@dataclass
class PipelineConfig:
    min_support: int | None = None  # None -> max(2, ceil(0.05 * cluster size))
    seed: int = 42
    stages: tuple[str, ...] = STAGES
    workers: int = 4

    def fingerprint(self, task_name: str) -> dict:
        return {
            "task_name": task_name,
            "seed": self.seed,
            "min_support": self.min_support,
        }


@dataclass
class PipelineRun:
    """Everything a finished (or failed) run knows about itself."""

    task_name: str
    run_dir: Path
    stages_run: list[str] = field(default_factory=list)
    stages_resumed: list[str] = field(default_factory=list)
    call_counts: dict[str, int] = field(default_factory=dict)
    flags: dict[str, dict] = field(default_factory=dict)
    videos_total: int = 0
    clustered: int = 0
    wall_time_s: float = 0.0


def run_pipeline(
    corpus: Corpus,
    gateway: ModelGateway,
    config: PipelineConfig | None = None,
    run_dir: Path | None = None,
) -> tuple[graph_store.TaskGraph, PipelineRun]:
    """Drive all requested stages over a loaded corpus.

    With the scripted backend and a fixed seed the resulting graph file is
    byte-identical across runs and across interrupted/resumed runs.
    """
    config = config or PipelineConfig()
    run_dir = Path(run_dir) if run_dir else Path("runs") / graph_store.task_slug(corpus.task_name)
    run_dir.mkdir(parents=True, exist_ok=True)
    run = PipelineRun(task_name=corpus.task_name, run_dir=run_dir, videos_total=len(corpus))
    started = time.monotonic()

    outcome_stage = _run_stage(
        "outcomes",
        run,
        config,
        corpus,
        gateway,
        compute=lambda: run_outcome_stage(gateway, corpus, seed=config.seed, workers=config.workers),
        encode=_encode_outcomes,
        decode=_decode_outcomes,
        empty=lambda: OutcomeStage(clusters=[], descriptions={}, segments={}, flags={}),
    )
    run.flags["outcomes"] = dict(outcome_stage.flags)
    run.clustered = sum(len(c.member_video_ids) for c in outcome_stage.clusters)

    dai_results = _run_stage(
        "dai",
        run,
        config,
        corpus,
        gateway,
        compute=lambda: _compute_dai(gateway, corpus, outcome_stage, config),
        encode=_encode_dai,
        decode=_decode_dai,
        empty=dict,
    )
    run.flags["dai"] = {name: dict(r.flags) for name, r in dai_results.items()}

    req_sets, tallies, req_flags = _run_stage(
        "requirements",
        run,
        config,
        corpus,
        gateway,
        compute=lambda: _compute_requirements(gateway, corpus, outcome_stage, dai_results),
        encode=_encode_requirements,
        decode=_decode_requirements,
        empty=lambda: ({}, {}, {}),
    )
    run.flags["requirements"] = dict(req_flags)

    methods = _run_stage(
        "methods",
        run,
        config,
        corpus,
        gateway,
        compute=lambda: _compute_methods(gateway, corpus, outcome_stage, dai_results),
        encode=_encode_methods,
        decode=_decode_methods,
        empty=dict,
    )
    run.flags["methods"] = {
        cluster: {step: dict(sm.flags) for step, sm in per_step.items() if sm.flags}
        for cluster, per_step in methods.items()
    }

    report = {
        "videos": {vid: v.playback_ref for vid, v in sorted(corpus.videos.items())},
        "flags": run.flags,
        "call_counts": dict(sorted(run.call_counts.items())),
        "counts": {
            "videos_total": run.videos_total,
            "clustered": run.clustered,
            "flagged": len(run.flags.get("outcomes", {})),
        },
    }
    try:
        task_graph = graph_store.assemble(
            corpus, outcome_stage, dai_results, tallies, methods, report=report
        )
    except graph_store.ConsistencyError as exc:
        raise StageError("assemble", exc, run_dir) from exc

    run.wall_time_s = time.monotonic() - started
    _write_report(run)
    return task_graph, run


def report(run: PipelineRun) -> dict:
    """Run summary: per-stage exclusions, per-template call counts, wall time."""
    return {
        "task_name": run.task_name,
        "run_dir": str(run.run_dir),
        "stages_run": run.stages_run,
        "stages_resumed": run.stages_resumed,
        "videos_total": run.videos_total,
        "clustered": run.clustered,
        "excluded": {stage: len(flags) for stage, flags in run.flags.items()},
        "flags": run.flags,
        "call_counts": dict(sorted(run.call_counts.items())),
        "wall_time_s": round(run.wall_time_s, 3),
    }


def _write_report(run: PipelineRun) -> None:
    path = run.run_dir / "report.json"
    path.write_text(json.dumps(report(run), indent=2, sort_keys=True) + "\n", encoding="utf-8")


# --- stage driver -----------------------------------------------------------


def _run_stage(stage, run, config, corpus, gateway, compute, encode, decode, empty):
    path = run.run_dir / f"{stage}.json"
    fingerprint = config.fingerprint(corpus.task_name)
    if path.exists():
        try:
            saved = json.loads(path.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise StageError(stage, exc, run.run_dir) from exc
        if saved.get("fingerprint") == fingerprint:
            run.stages_resumed.append(stage)
            for template, n in saved.get("call_counts", {}).items():
                run.call_counts[template] = run.call_counts.get(template, 0) + n
            return decode(saved["data"])
        log.warning("checkpoint %s has a different fingerprint; recomputing", path)
    if stage not in config.stages:
        return empty()
    before = gateway.call_counts
    try:
        result = compute()
    except Exception as exc:
        raise StageError(stage, exc, run.run_dir) from exc
    after = gateway.call_counts
    stage_counts = {
        t: after[t] - before.get(t, 0) for t in after if after[t] != before.get(t, 0)
    }
    for template, n in stage_counts.items():
        run.call_counts[template] = run.call_counts.get(template, 0) + n
    payload = {"fingerprint": fingerprint, "call_counts": stage_counts, "data": encode(result)}
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    run.stages_run.append(stage)
    return result


# --- stage computations -------------------------------------------------------


def _compute_dai(gateway, corpus, outcome_stage, config) -> dict[str, DaiResult]:
    results = {}
    for cluster in sorted(outcome_stage.clusters, key=lambda c: c.name):
        videos = [corpus.videos[vid] for vid in cluster.member_video_ids]
        results[cluster.name] = run_dai(
            gateway, videos, min_support=config.min_support, workers=config.workers
        )
    return results


def _compute_requirements(gateway, corpus, outcome_stage, dai_results):
    req_sets: dict[str, RequirementSet] = {}
    flags: dict[str, str] = {}
    clustered_ids = sorted(
        vid for c in outcome_stage.clusters for vid in c.member_video_ids
    )
    for vid in clustered_ids:
        try:
            req_sets[vid] = extract_requirements(gateway, corpus.videos[vid])
        except SchemaError:
            flags[vid] = FLAG_NO_REQUIREMENTS
            req_sets[vid] = RequirementSet(video_id=vid, ingredients=[], tools=[])

    tallies: dict[str, dict[str, RequirementTally]] = {}
    for cluster in outcome_stage.clusters:
        dai = dai_results.get(cluster.name)
        if dai is None:
            continue
        per_kind = {}
        for approach in dai.approaches:
            supporting = set(approach.supporting_video_ids)
            per_kind[approach.kind.value] = tally_requirements(
                [req_sets[vid] for vid in sorted(supporting) if vid in req_sets],
                supporting,
                approach_key=f"{cluster.name}/{approach.kind.value}",
            )
        tallies[cluster.name] = per_kind
    return req_sets, tallies, flags


def _compute_methods(gateway, corpus, outcome_stage, dai_results):
    methods: dict[str, dict[str, StepMethods]] = {}
    for cluster in sorted(outcome_stage.clusters, key=lambda c: c.name):
        dai = dai_results.get(cluster.name)
        if dai is None or not dai.approaches:
            continue
        standard = next(
            (a for a in dai.approaches if a.kind == ApproachKind.STANDARD), None
        )
        needed: list[str] = []
        for approach in dai.approaches:
            for step in approach.sequence.steps:
                if step not in needed:
                    needed.append(step)
        per_step: dict[str, StepMethods] = {}
        for step_name in needed:
            spans = [
                span
                for vid in sorted(dai.spans)
                for span in dai.spans[vid]
                if span.step_name == step_name
            ]
            if not spans:
                continue
            description_spans = None
            if standard is not None:
                std_spans = [
                    s for s in spans if s.video_id in standard.supporting_video_ids
                ]
                if std_spans:
                    description_spans = std_spans
            per_step[step_name] = build_step_methods(
                gateway,
                corpus.task_name,
                step_name,
                spans,
                corpus,
                description_spans=description_spans,
            )
        methods[cluster.name] = per_step
    return methods


# --- checkpoint codecs --------------------------------------------------------


def _encode_outcomes(stage: OutcomeStage) -> dict:
    return {
        "clusters": [
            {
                "name": c.name,
                "member_video_ids": c.member_video_ids,
                "representative_frames": [
                    {"video_id": f.video_id, "t_s": f.t_s, "uri": f.uri}
                    for f in c.representative_frames
                ],
            }
            for c in stage.clusters
        ],
        "descriptions": stage.descriptions,
        "segments": stage.segments,
        "flags": stage.flags,
    }


def _decode_outcomes(data: dict) -> OutcomeStage:
    return OutcomeStage(
        clusters=[
            OutcomeCluster(
                name=c["name"],
                member_video_ids=list(c["member_video_ids"]),
                representative_frames=[
                    FrameAsset(f["video_id"], f["t_s"], f["uri"])
                    for f in c["representative_frames"]
                ],
            )
            for c in data["clusters"]
        ],
        descriptions=dict(data["descriptions"]),
        segments={vid: list(ix) for vid, ix in data["segments"].items()},
        flags=dict(data["flags"]),
    )


def _encode_span(span: StepSpan) -> dict:
    return {
        "video_id": span.video_id,
        "step_name": span.step_name,
        "sentence_start": span.sentence_start,
        "sentence_end": span.sentence_end,
        "start_s": span.start_s,
        "end_s": span.end_s,
    }


def _decode_span(data: dict) -> StepSpan:
    return StepSpan(**data)


def _encode_dai(results: dict[str, DaiResult]) -> dict:
    return {
        name: {
            "taxonomy": r.taxonomy,
            "taxonomy_sizes": r.taxonomy_sizes,
            "spans": {vid: [_encode_span(s) for s in spans] for vid, spans in r.spans.items()},
            "approaches": [
                {
                    "kind": a.kind.value,
                    "steps": list(a.sequence.steps),
                    "support": a.sequence.support,
                    "supporting_video_ids": a.supporting_video_ids,
                }
                for a in r.approaches
            ],
            "flags": r.flags,
        }
        for name, r in results.items()
    }


def _decode_dai(data: dict) -> dict[str, DaiResult]:
    results = {}
    for name, r in data.items():
        spans = {
            vid: [_decode_span(s) for s in span_list] for vid, span_list in r["spans"].items()
        }
        results[name] = DaiResult(
            taxonomy=list(r["taxonomy"]),
            taxonomy_sizes=list(r["taxonomy_sizes"]),
            spans=spans,
            sequences={vid: tuple(s.step_name for s in sp) for vid, sp in spans.items()},
            approaches=[
                Approach(
                    kind=ApproachKind(a["kind"]),
                    sequence=CanonicalSequence(tuple(a["steps"]), a["support"]),
                    supporting_video_ids=list(a["supporting_video_ids"]),
                )
                for a in r["approaches"]
            ],
            flags=dict(r["flags"]),
        )
    return results


def _encode_requirements(result) -> dict:
    req_sets, tallies, flags = result
    return {
        "flags": flags,
        "sets": {
            vid: {"ingredients": r.ingredients, "tools": r.tools}
            for vid, r in req_sets.items()
        },
        "tallies": {
            cluster: {
                kind: {
                    "approach_key": tally.approach_key,
                    "items": [
                        {
                            "name": it.name,
                            "kind": it.kind.value,
                            "count": it.count,
                            "fraction": it.fraction,
                        }
                        for it in tally.items
                    ],
                }
                for kind, tally in per_kind.items()
            }
            for cluster, per_kind in tallies.items()
        },
    }


def _decode_requirements(data: dict):
    req_sets = {
        vid: RequirementSet(video_id=vid, ingredients=list(r["ingredients"]), tools=list(r["tools"]))
        for vid, r in data["sets"].items()
    }
    tallies = {
        cluster: {
            kind: RequirementTally(
                approach_key=t["approach_key"],
                items=[
                    TallyItem(
                        name=it["name"],
                        kind=ItemKind(it["kind"]),
                        count=it["count"],
                        fraction=it["fraction"],
                    )
                    for it in t["items"]
                ],
            )
            for kind, t in per_kind.items()
        }
        for cluster, per_kind in data["tallies"].items()
    }
    return req_sets, tallies, dict(data.get("flags", {}))


def _encode_methods(methods: dict[str, dict[str, StepMethods]]) -> dict:
    return {
        cluster: {
            step: {
                "description": sm.description,
                "flags": sm.flags,
                "clusters": [
                    {
                        "name": mc.name,
                        "member_spans": [_encode_span(s) for s in mc.member_spans],
                        "clip_summaries": [
                            {
                                "video_id": vid,
                                "sentence_start": start,
                                "sentence_end": end,
                                "summary": text,
                            }
                            for (vid, start, end), text in sorted(mc.clip_summaries.items())
                        ],
                        "tips": [
                            {
                                "text": tip.text,
                                "groundings": [
                                    {
                                        "video_id": g.video_id,
                                        "sentence_start": g.sentence_start,
                                        "sentence_end": g.sentence_end,
                                    }
                                    for g in tip.groundings
                                ],
                            }
                            for tip in mc.tips
                        ],
                    }
                    for mc in sm.clusters
                ],
            }
            for step, sm in per_step.items()
        }
        for cluster, per_step in methods.items()
    }


def _decode_methods(data: dict) -> dict[str, dict[str, StepMethods]]:
    out: dict[str, dict[str, StepMethods]] = {}
    for cluster, per_step in data.items():
        out[cluster] = {}
        for step, sm in per_step.items():
            clusters = []
            for mc in sm["clusters"]:
                summaries = {
                    (c["video_id"], c["sentence_start"], c["sentence_end"]): c["summary"]
                    for c in mc["clip_summaries"]
                }
                clusters.append(
                    MethodCluster(
                        step_name=step,
                        name=mc["name"],
                        member_spans=[_decode_span(s) for s in mc["member_spans"]],
                        clip_summaries=summaries,
                        tips=[
                            Tip(
                                text=t["text"],
                                groundings=[
                                    TipGrounding(
                                        g["video_id"], g["sentence_start"], g["sentence_end"]
                                    )
                                    for g in t["groundings"]
                                ],
                            )
                            for t in mc["tips"]
                        ],
                    )
                )
            out[cluster][step] = StepMethods(
                step_name=step,
                clusters=clusters,
                description=sm["description"],
                flags=dict(sm["flags"]),
            )
    return out
