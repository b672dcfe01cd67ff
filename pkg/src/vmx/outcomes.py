"""Outcome processing: locate outcome narration, describe, cluster, assign.

Two phases over a task corpus: per-video extraction (which transcript
segments describe the end result, plus a one-sentence description built
from those segments' frames), then aggregation (cluster descriptions into
2-4 outcome types and assign every video to exactly one).  Videos whose
calls fail or that narrate no outcome are flagged and excluded from
clustering but stay in the corpus.
"""

from __future__ import annotations

import logging
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .corpus import Corpus, FrameAsset, VideoRecord, frames_in_window
from .gateway import (
    ModelGateway,
    PromptCall,
    SchemaError,
    TemplateId,
    render_description_lines,
    render_name_list,
    render_transcript,
)

log = logging.getLogger(__name__)

FLAG_NO_OUTCOME = "no_outcome"
FLAG_NO_DESCRIPTION = "no_description"
FLAG_UNASSIGNED = "unassigned"


class TooFewVideos(Exception):
    """Zero clusterable descriptions; nothing to cluster."""


@dataclass
class OutcomeSegments:
    video_id: str
    indices: list[int]


@dataclass
class OutcomeDescription:
    video_id: str
    text: str


@dataclass
class OutcomeCluster:
    name: str
    member_video_ids: list[str]
    representative_frames: list[FrameAsset] = field(default_factory=list)


@dataclass
class OutcomeStage:
    """Everything the outcome stage produced, keyed for the later stages."""

    clusters: list[OutcomeCluster]
    descriptions: dict[str, str]
    segments: dict[str, list[int]]
    flags: dict[str, str]


def contiguous_runs(indices: list[int]) -> list[tuple[int, int]]:
    """Split a sorted index list into inclusive (start, end) runs."""
    runs: list[tuple[int, int]] = []
    for idx in indices:
        if runs and idx == runs[-1][1] + 1:
            runs[-1] = (runs[-1][0], idx)
        else:
            runs.append((idx, idx))
    return runs


def extract_outcome_segments(gateway: ModelGateway, video: VideoRecord) -> OutcomeSegments:
    """Sentence indices that narrate the final result; may be empty.

    Out-of-range indices from the model are clipped out.
    """
    response = gateway.call(
        PromptCall(
            template_id=TemplateId.OUTCOME_SEGMENTS,
            substitutions={
                "task_name": video.task_name,
                "transcript_data": render_transcript(video.sentences),
            },
        )
    )
    n = len(video.sentences)
    indices = sorted({i for i in response.payload["index"] if 0 <= i < n})
    return OutcomeSegments(video_id=video.video_id, indices=indices)


def outcome_frames(video: VideoRecord, segs: OutcomeSegments) -> list[FrameAsset]:
    """One frame per second across every outcome segment window."""
    frames: dict[tuple[float, str], FrameAsset] = {}
    for start, end in contiguous_runs(segs.indices):
        window = video.sentence_window(start, end)
        for f in frames_in_window(video, window[0], window[1], stride_s=1.0):
            frames[(f.t_s, f.uri)] = f
    return sorted(frames.values(), key=lambda f: f.t_s)


def describe_outcome(
    gateway: ModelGateway, video: VideoRecord, segs: OutcomeSegments
) -> OutcomeDescription:
    """One-sentence appearance-focused description of the outcome.

    Requires outcome segments unless the video is degraded, in which case
    the description is produced from the transcript alone.
    """
    if not segs.indices and not video.degraded:
        raise ValueError(f"{video.video_id}: no outcome segments and video is not degraded")
    response = gateway.call(
        PromptCall(
            template_id=TemplateId.OUTCOME_DESC,
            substitutions={
                "visual_frames": "",
                "task_name": video.task_name,
                "transcript_data": render_transcript(video.sentences),
            },
            images=tuple(outcome_frames(video, segs)),
        )
    )
    return OutcomeDescription(video_id=video.video_id, text=response.payload)


def cluster_outcomes(
    gateway: ModelGateway, task_name: str, descriptions: list[OutcomeDescription]
) -> list[str]:
    """2-4 outcome type names; a single description short-circuits to an
    implicit cluster named after the task, with no model call."""
    if not descriptions:
        raise TooFewVideos("no clusterable outcome descriptions")
    if len(descriptions) < 2:
        return [task_name]
    response = gateway.call(
        PromptCall(
            template_id=TemplateId.OUTCOME_CLUSTER,
            substitutions={
                "task_name": task_name,
                "outcome_descriptions": render_description_lines(
                    {d.video_id: d.text for d in descriptions}
                ),
            },
        )
    )
    return list(response.payload["clusters"])


def assign_outcome(
    gateway: ModelGateway, description: OutcomeDescription, cluster_names: list[str]
) -> str:
    if not cluster_names:
        raise ValueError("cluster_names must be non-empty")
    if len(cluster_names) == 1:
        return cluster_names[0]
    response = gateway.call(
        PromptCall(
            template_id=TemplateId.OUTCOME_ASSIGN,
            substitutions={
                "outcome_description": description.text,
                "outcome_types": render_name_list(cluster_names),
            },
            enum_options=tuple(cluster_names),
        )
    )
    return response.payload["outcome"]


def pick_representative_frames(
    cluster: OutcomeCluster,
    corpus: Corpus,
    segments: dict[str, list[int]],
    seed: int,
) -> list[FrameAsset]:
    """Up to two frames, one per randomly chosen member video (seeded RNG),
    each the frame nearest the temporal midpoint of that video's last
    outcome segment."""
    candidates = [
        vid
        for vid in cluster.member_video_ids
        if corpus.videos[vid].frames and segments.get(vid)
    ]
    rng = random.Random(f"{seed}:{cluster.name}")
    chosen = candidates if len(candidates) <= 2 else rng.sample(candidates, 2)
    frames = []
    for vid in chosen:
        video = corpus.videos[vid]
        start, end = contiguous_runs(segments[vid])[-1]
        lo, hi = video.sentence_window(start, end)
        midpoint = (lo + hi) / 2.0
        frames.append(min(video.frames, key=lambda f: (abs(f.t_s - midpoint), f.t_s)))
    return frames


def run_outcome_stage(
    gateway: ModelGateway, corpus: Corpus, seed: int = 42, workers: int = 4
) -> OutcomeStage:
    """Full phase-1/phase-2 outcome pass over a corpus."""
    segments: dict[str, list[int]] = {}
    descriptions: dict[str, str] = {}
    flags: dict[str, str] = {}

    def process(video: VideoRecord) -> tuple[str, list[int] | None, str | None, str | None]:
        try:
            segs = extract_outcome_segments(gateway, video)
        except SchemaError:
            return video.video_id, None, None, FLAG_NO_OUTCOME
        if not segs.indices and not video.degraded:
            return video.video_id, segs.indices, None, FLAG_NO_OUTCOME
        try:
            desc = describe_outcome(gateway, video, segs)
        except SchemaError:
            return video.video_id, segs.indices, None, FLAG_NO_DESCRIPTION
        return video.video_id, segs.indices, desc.text, None

    videos = corpus.ordered()
    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        for vid, segs, desc, flag in pool.map(process, videos):
            if segs is not None:
                segments[vid] = segs
            if flag is not None:
                flags[vid] = flag
            elif desc is not None:
                descriptions[vid] = desc

    ordered_descs = [
        OutcomeDescription(vid, descriptions[vid]) for vid in sorted(descriptions)
    ]
    if not ordered_descs:
        return OutcomeStage(clusters=[], descriptions={}, segments=segments, flags=flags)
    names = cluster_outcomes(gateway, corpus.task_name, ordered_descs)

    members: dict[str, list[str]] = {name: [] for name in names}
    for desc in ordered_descs:
        try:
            assigned = assign_outcome(gateway, desc, names)
        except SchemaError:
            flags[desc.video_id] = FLAG_UNASSIGNED
            continue
        members[assigned].append(desc.video_id)

    clusters = [
        OutcomeCluster(name=name, member_video_ids=sorted(vids))
        for name, vids in members.items()
        if vids  # a name nobody was assigned to is dead weight
    ]
    for cluster in clusters:
        cluster.representative_frames = pick_representative_frames(
            cluster, corpus, segments, seed
        )
    return OutcomeStage(
        clusters=clusters, descriptions=descriptions, segments=segments, flags=flags
    )
