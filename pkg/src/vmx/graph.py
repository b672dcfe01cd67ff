"""Assemble engine outputs into the persisted task graph and load it back.

The hierarchy is task -> outcome clusters -> approaches -> steps ->
methods -> clips/tips.  Serialization is canonical (sorted keys, seconds
rounded to 3 decimals, fixed ordering) so structurally equal graphs are
byte-equal on disk; `graphs/<task_slug>.json` is the storage convention.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from pathlib import Path

from .corpus import Corpus
from .dai import ApproachKind, DaiResult
from .methods import StepMethods
from .outcomes import OutcomeStage
from .requirements import RequirementTally, shade_bucket

SCHEMA_VERSION = "1.0"

_KIND_ORDER = {ApproachKind.STANDARD: 0, ApproachKind.SIMPLE: 1, ApproachKind.COMPLEX: 2}


class ConsistencyError(Exception):
    """The graph references a video or step that does not exist."""


class VersionError(Exception):
    """Unsupported schema_version in a persisted graph."""


def task_slug(task_name: str) -> str:
    slug = re.sub(r"[^a-z0-9]+", "-", task_name.lower()).strip("-")
    return slug or "task"


def _r3(value: float) -> float:
    return round(float(value), 3)


@dataclass
class GroundingNode:
    video_id: str
    sentence_start: int
    sentence_end: int


@dataclass
class TipNode:
    text: str
    groundings: list[GroundingNode]


@dataclass
class ClipNode:
    video_id: str
    start_s: float
    end_s: float
    sentence_start: int
    sentence_end: int
    summary: str


@dataclass
class MethodNode:
    name: str
    clips: list[ClipNode]
    tips: list[TipNode]


@dataclass
class StepNode:
    step_name: str
    description: str
    methods: list[MethodNode]


@dataclass
class RequirementItemNode:
    name: str
    kind: str
    count: int
    fraction: float
    shade: str


@dataclass
class ApproachNode:
    kind: str
    step_sequence: list[str]
    supporting_video_ids: list[str]
    requirements: list[RequirementItemNode]
    steps: list[StepNode]


@dataclass
class FrameRef:
    video_id: str
    t_s: float
    uri: str


@dataclass
class OutcomeNode:
    name: str
    representative_frames: list[FrameRef]
    approaches: list[ApproachNode]


@dataclass
class TaskGraph:
    schema_version: str
    task_name: str
    outcome_clusters: list[OutcomeNode]
    pipeline_report: dict = field(default_factory=dict)

    def video_ids(self) -> set[str]:
        return set(self.pipeline_report.get("videos", {}))


def assemble(
    corpus: Corpus,
    outcome_stage: OutcomeStage,
    dai_results: dict[str, DaiResult],
    tallies: dict[str, dict[str, RequirementTally]],
    methods: dict[str, dict[str, StepMethods]],
    report: dict | None = None,
) -> TaskGraph:
    """Join all stage outputs into one validated TaskGraph.

    Ordering is deterministic: clusters by name, approaches
    standard/simple/complex, steps in sequence order, clips by
    (video_id, start_s).
    """
    pipeline_report = dict(report or {})
    pipeline_report.setdefault(
        "videos", {vid: v.playback_ref for vid, v in sorted(corpus.videos.items())}
    )

    clusters = []
    for cluster in sorted(outcome_stage.clusters, key=lambda c: c.name):
        dai = dai_results.get(cluster.name)
        approaches = []
        if dai is not None:
            for approach in sorted(dai.approaches, key=lambda a: _KIND_ORDER[a.kind]):
                kind_tallies = tallies.get(cluster.name, {})
                tally = kind_tallies.get(approach.kind.value)
                step_methods = methods.get(cluster.name, {})
                steps = []
                for step_name in approach.sequence.steps:
                    sm = step_methods.get(step_name)
                    steps.append(_step_node(step_name, sm))
                approaches.append(
                    ApproachNode(
                        kind=approach.kind.value,
                        step_sequence=list(approach.sequence.steps),
                        supporting_video_ids=sorted(approach.supporting_video_ids),
                        requirements=_requirement_items(tally),
                        steps=steps,
                    )
                )
        clusters.append(
            OutcomeNode(
                name=cluster.name,
                representative_frames=[
                    FrameRef(video_id=f.video_id, t_s=_r3(f.t_s), uri=f.uri)
                    for f in cluster.representative_frames
                ],
                approaches=approaches,
            )
        )

    graph = TaskGraph(
        schema_version=SCHEMA_VERSION,
        task_name=corpus.task_name,
        outcome_clusters=clusters,
        pipeline_report=pipeline_report,
    )
    validate(graph)
    return graph


def _requirement_items(tally: RequirementTally | None) -> list[RequirementItemNode]:
    if tally is None:
        return []
    return [
        RequirementItemNode(
            name=item.name,
            kind=item.kind.value,
            count=item.count,
            fraction=_r3(item.fraction),
            shade=shade_bucket(item.fraction),
        )
        for item in tally.items
    ]


def _step_node(step_name: str, sm: StepMethods | None) -> StepNode:
    if sm is None:
        return StepNode(step_name=step_name, description="", methods=[])
    method_nodes = []
    for cluster in sm.clusters:
        clips = []
        for span in sorted(cluster.member_spans, key=lambda s: (s.video_id, s.start_s)):
            key = (span.video_id, span.sentence_start, span.sentence_end)
            clips.append(
                ClipNode(
                    video_id=span.video_id,
                    start_s=_r3(span.start_s),
                    end_s=_r3(span.end_s),
                    sentence_start=span.sentence_start,
                    sentence_end=span.sentence_end,
                    summary=cluster.clip_summaries.get(key, ""),
                )
            )
        tips = [
            TipNode(
                text=tip.text,
                groundings=[
                    GroundingNode(g.video_id, g.sentence_start, g.sentence_end)
                    for g in tip.groundings
                ],
            )
            for tip in cluster.tips
        ]
        method_nodes.append(MethodNode(name=cluster.name, clips=clips, tips=tips))
    return StepNode(step_name=step_name, description=sm.description, methods=method_nodes)


def validate(graph: TaskGraph) -> None:
    """Referential-integrity pass; raises ConsistencyError on the first hole."""
    if graph.schema_version != SCHEMA_VERSION:
        raise VersionError(f"unsupported schema_version {graph.schema_version!r}")
    known = graph.video_ids()

    def check_vid(vid: str, where: str) -> None:
        if vid not in known:
            raise ConsistencyError(f"{where}: dangling video_id {vid!r}")

    for cluster in graph.outcome_clusters:
        for frame in cluster.representative_frames:
            check_vid(frame.video_id, f"cluster {cluster.name!r} frame")
        for approach in cluster.approaches:
            for vid in approach.supporting_video_ids:
                check_vid(vid, f"{cluster.name}/{approach.kind} supporting set")
            step_names = [s.step_name for s in approach.steps]
            if step_names != approach.step_sequence:
                raise ConsistencyError(
                    f"{cluster.name}/{approach.kind}: steps {step_names} do not "
                    f"mirror step_sequence {approach.step_sequence}"
                )
            for step in approach.steps:
                for method in step.methods:
                    for clip in method.clips:
                        check_vid(clip.video_id, f"clip in {step.step_name}/{method.name}")
                        if clip.sentence_start > clip.sentence_end:
                            raise ConsistencyError(
                                f"clip in {step.step_name}/{method.name} has inverted sentences"
                            )
                    for tip in method.tips:
                        for g in tip.groundings:
                            check_vid(g.video_id, f"tip grounding in {step.step_name}")


# --- serialization ----------------------------------------------------------


def to_dict(graph: TaskGraph) -> dict:
    return {
        "schema_version": graph.schema_version,
        "task_name": graph.task_name,
        "outcome_clusters": [
            {
                "name": c.name,
                "representative_frames": [
                    {"video_id": f.video_id, "t_s": _r3(f.t_s), "uri": f.uri}
                    for f in c.representative_frames
                ],
                "approaches": [
                    {
                        "kind": a.kind,
                        "step_sequence": a.step_sequence,
                        "supporting_video_ids": a.supporting_video_ids,
                        "requirements": [
                            {
                                "name": r.name,
                                "kind": r.kind,
                                "count": r.count,
                                "fraction": _r3(r.fraction),
                                "shade": r.shade,
                            }
                            for r in a.requirements
                        ],
                        "steps": [
                            {
                                "step_name": s.step_name,
                                "description": s.description,
                                "methods": [
                                    {
                                        "name": m.name,
                                        "clips": [
                                            {
                                                "video_id": cl.video_id,
                                                "start_s": _r3(cl.start_s),
                                                "end_s": _r3(cl.end_s),
                                                "sentence_start": cl.sentence_start,
                                                "sentence_end": cl.sentence_end,
                                                "summary": cl.summary,
                                            }
                                            for cl in m.clips
                                        ],
                                        "tips": [
                                            {
                                                "text": t.text,
                                                "groundings": [
                                                    {
                                                        "video_id": g.video_id,
                                                        "sentence_start": g.sentence_start,
                                                        "sentence_end": g.sentence_end,
                                                    }
                                                    for g in t.groundings
                                                ],
                                            }
                                            for t in m.tips
                                        ],
                                    }
                                    for m in s.methods
                                ],
                            }
                            for s in a.steps
                        ],
                    }
                    for a in c.approaches
                ],
            }
            for c in graph.outcome_clusters
        ],
        "pipeline_report": graph.pipeline_report,
    }


def from_dict(data: dict) -> TaskGraph:
    version = data.get("schema_version", "")
    if version != SCHEMA_VERSION:
        raise VersionError(f"unsupported schema_version {version!r}")
    clusters = []
    for c in data.get("outcome_clusters", []):
        approaches = []
        for a in c.get("approaches", []):
            steps = []
            for s in a.get("steps", []):
                methods = []
                for m in s.get("methods", []):
                    clips = [
                        ClipNode(
                            video_id=cl["video_id"],
                            start_s=cl["start_s"],
                            end_s=cl["end_s"],
                            sentence_start=cl["sentence_start"],
                            sentence_end=cl["sentence_end"],
                            summary=cl.get("summary", ""),
                        )
                        for cl in m.get("clips", [])
                    ]
                    tips = [
                        TipNode(
                            text=t["text"],
                            groundings=[
                                GroundingNode(
                                    g["video_id"], g["sentence_start"], g["sentence_end"]
                                )
                                for g in t.get("groundings", [])
                            ],
                        )
                        for t in m.get("tips", [])
                    ]
                    methods.append(MethodNode(name=m["name"], clips=clips, tips=tips))
                steps.append(
                    StepNode(
                        step_name=s["step_name"],
                        description=s.get("description", ""),
                        methods=methods,
                    )
                )
            approaches.append(
                ApproachNode(
                    kind=a["kind"],
                    step_sequence=list(a.get("step_sequence", [])),
                    supporting_video_ids=list(a.get("supporting_video_ids", [])),
                    requirements=[
                        RequirementItemNode(
                            name=r["name"],
                            kind=r["kind"],
                            count=r["count"],
                            fraction=r["fraction"],
                            shade=r.get("shade", ""),
                        )
                        for r in a.get("requirements", [])
                    ],
                    steps=steps,
                )
            )
        clusters.append(
            OutcomeNode(
                name=c["name"],
                representative_frames=[
                    FrameRef(f["video_id"], f["t_s"], f["uri"])
                    for f in c.get("representative_frames", [])
                ],
                approaches=approaches,
            )
        )
    return TaskGraph(
        schema_version=version,
        task_name=data["task_name"],
        outcome_clusters=clusters,
        pipeline_report=data.get("pipeline_report", {}),
    )


def canonical_bytes(graph: TaskGraph) -> bytes:
    text = json.dumps(to_dict(graph), sort_keys=True, indent=2, ensure_ascii=False)
    return (text + "\n").encode("utf-8")


def save(graph: TaskGraph, path: Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(canonical_bytes(graph))


def load(path: Path) -> TaskGraph:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise IOError(f"cannot read graph {path}: {exc}") from exc
    return from_dict(data)
