"""Dynamic approach identification over one outcome cluster's videos.

Three phases: (a) iteratively induce a step taxonomy, folding each video
into the running step list so it only ever grows; (b) re-apply the final
taxonomy to every video, yielding grounded non-overlapping step spans;
(c) group the per-video step sequences and select the Standard (most
common), Simple (fewest steps) and Complex (most steps) approaches.
"""

from __future__ import annotations

import logging
import math
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum

from .corpus import VideoRecord
from .gateway import (
    ModelGateway,
    PromptCall,
    SchemaError,
    TemplateId,
    render_name_list,
    render_transcript,
)

log = logging.getLogger(__name__)

FLAG_NO_STEPS = "no_steps"
FLAG_STEP_SCHEMA_ERROR = "step_assignment_failed"


class AllVideosFailed(Exception):
    """Every video failed taxonomy extraction."""


class NoSequences(Exception):
    """No video produced a non-empty step sequence."""


@dataclass
class StepTaxonomy:
    steps: list[str] = field(default_factory=list)

    def __contains__(self, name: str) -> bool:
        return name in self.steps

    def __len__(self) -> int:
        return len(self.steps)


@dataclass
class StepSpan:
    video_id: str
    step_name: str
    sentence_start: int
    sentence_end: int
    start_s: float
    end_s: float


@dataclass(frozen=True)
class CanonicalSequence:
    steps: tuple[str, ...]
    support: int


class ApproachKind(str, Enum):
    STANDARD = "STANDARD"
    SIMPLE = "SIMPLE"
    COMPLEX = "COMPLEX"


@dataclass
class Approach:
    kind: ApproachKind
    sequence: CanonicalSequence
    supporting_video_ids: list[str]


@dataclass
class TaxonomyBuild:
    taxonomy: StepTaxonomy
    sizes: list[int]  # taxonomy size after each processed video
    skipped_video_ids: list[str]


def extend_taxonomy(
    gateway: ModelGateway, video: VideoRecord, taxonomy: StepTaxonomy
) -> StepTaxonomy:
    """One refinement fold: the result is always a superset of the input
    (the gateway unions the lists when the model drops known names)."""
    response = gateway.call(
        PromptCall(
            template_id=TemplateId.STEP_IDENTIFY,
            substitutions={
                "task_name": video.task_name,
                "original_step": render_name_list(taxonomy.steps),
                "transcript_data": render_transcript(video.sentences),
            },
        )
    )
    steps = list(response.payload["steps"])
    missing = [s for s in taxonomy.steps if s not in steps]
    if missing:  # defensive; the gateway already enforces the union
        steps = taxonomy.steps + [s for s in steps if s not in taxonomy.steps]
    return StepTaxonomy(steps=steps)


def build_taxonomy(gateway: ModelGateway, videos: list[VideoRecord]) -> TaxonomyBuild:
    """Fold extend_taxonomy over videos in ascending video_id order.

    Videos whose call fails are skipped for construction but remain
    eligible for span assignment.
    """
    if not videos:
        raise AllVideosFailed("no videos to build a taxonomy from")
    taxonomy = StepTaxonomy()
    sizes: list[int] = []
    skipped: list[str] = []
    for video in sorted(videos, key=lambda v: v.video_id):
        try:
            taxonomy = extend_taxonomy(gateway, video, taxonomy)
        except SchemaError:
            skipped.append(video.video_id)
            log.warning("taxonomy extraction failed for %s; skipping", video.video_id)
        sizes.append(len(taxonomy))
    if len(skipped) == len(videos):
        raise AllVideosFailed("taxonomy extraction failed for every video")
    return TaxonomyBuild(taxonomy=taxonomy, sizes=sizes, skipped_video_ids=skipped)


def assign_steps(
    gateway: ModelGateway, video: VideoRecord, taxonomy: StepTaxonomy
) -> list[StepSpan]:
    """Grounded step spans for one video under the final taxonomy.

    Model output is repaired into a well-formed timeline: names outside
    the taxonomy are dropped, indices are clamped into range, inverted
    spans are dropped, and an overlapping earlier span is truncated to end
    before the later one starts.
    """
    if not taxonomy.steps:
        raise ValueError("taxonomy must be non-empty")
    response = gateway.call(
        PromptCall(
            template_id=TemplateId.STEP_ASSIGN,
            substitutions={
                "task_name": video.task_name,
                "whole_step": render_name_list(taxonomy.steps),
                "transcript_data": render_transcript(video.sentences),
            },
        )
    )
    n = len(video.sentences)
    raw_spans = []
    for item in response.payload["steps"]:
        if item["step_name"] not in taxonomy:
            continue
        start = min(max(int(item["sentence_start"]), 0), n - 1)
        end = min(max(int(item["sentence_end"]), 0), n - 1)
        if start > end:
            continue
        raw_spans.append((start, end, item["step_name"]))
    raw_spans.sort()

    repaired: list[tuple[int, int, str]] = []
    for start, end, name in raw_spans:
        while repaired and repaired[-1][1] >= start:
            prev_start, _, prev_name = repaired.pop()
            if prev_start <= start - 1:
                repaired.append((prev_start, start - 1, prev_name))
                break
            # truncation inverted the earlier span: drop it entirely
        repaired.append((start, end, name))

    spans = []
    for start, end, name in repaired:
        lo, hi = video.sentence_window(start, end)
        spans.append(
            StepSpan(
                video_id=video.video_id,
                step_name=name,
                sentence_start=start,
                sentence_end=end,
                start_s=lo,
                end_s=hi,
            )
        )
    return spans


def canonical_sequence(spans: list[StepSpan]) -> tuple[str, ...]:
    return tuple(s.step_name for s in spans)


def default_min_support(cluster_size: int) -> int:
    """Minimum video count for a non-standard approach to be emitted."""
    return max(2, math.ceil(0.05 * cluster_size))


def _tie_key(seq: tuple[str, ...]) -> tuple[int, tuple[str, ...]]:
    # shorter sequence first, then lexicographic on the names
    return (len(seq), seq)


def _composite_standard(
    sequences: dict[str, tuple[str, ...]]
) -> tuple[tuple[str, ...], list[str]]:
    """Fallback standard when every exact sequence is unique: the steps
    present in a majority of videos, ordered by mean normalized position,
    supported by the videos containing all of them."""
    n = len(sequences)
    positions: dict[str, list[float]] = {}
    containing: Counter = Counter()
    for seq in sequences.values():
        for step in set(seq):
            containing[step] += 1
        for i, step in enumerate(seq):
            positions.setdefault(step, []).append((i + 0.5) / len(seq))
    majority = [step for step, c in containing.items() if c > n / 2]
    ordered = tuple(
        sorted(majority, key=lambda s: (sum(positions[s]) / len(positions[s]), s))
    )
    supporting = [vid for vid, seq in sequences.items() if set(ordered) <= set(seq)]
    return ordered, sorted(supporting)


def identify_approaches(
    assignments: dict[str, tuple[str, ...]], min_support: int | None = None
) -> list[Approach]:
    """Select Standard / Simple / Complex approaches from step sequences.

    Standard is the modal exact sequence (ties: shorter, then
    lexicographic); when the modal support is 1 it falls back to the
    majority-step composite.  Simple/Complex come from sequences with
    support >= min_support that differ from Standard, respecting the
    Simple <= Standard <= Complex length ordering, and are omitted when no
    qualifying sequence exists.
    """
    sequences = {vid: tuple(seq) for vid, seq in assignments.items() if seq}
    if not sequences:
        raise NoSequences("every video has an empty step sequence")
    if min_support is None:
        min_support = default_min_support(len(sequences))

    counts: Counter = Counter(sequences.values())

    def videos_for(seq: tuple[str, ...]) -> list[str]:
        return sorted(vid for vid, s in sequences.items() if s == seq)

    max_support = max(counts.values())
    if max_support > 1:
        standard_seq = min(
            (seq for seq, c in counts.items() if c == max_support), key=_tie_key
        )
        standard = Approach(
            kind=ApproachKind.STANDARD,
            sequence=CanonicalSequence(standard_seq, max_support),
            supporting_video_ids=videos_for(standard_seq),
        )
    else:
        composite, supporting = _composite_standard(sequences)
        if composite and supporting:
            standard = Approach(
                kind=ApproachKind.STANDARD,
                sequence=CanonicalSequence(composite, len(supporting)),
                supporting_video_ids=supporting,
            )
        else:
            standard_seq = min(counts, key=_tie_key)
            standard = Approach(
                kind=ApproachKind.STANDARD,
                sequence=CanonicalSequence(standard_seq, 1),
                supporting_video_ids=videos_for(standard_seq),
            )

    approaches = [standard]
    std_seq = standard.sequence.steps
    candidates = [
        (seq, c) for seq, c in counts.items() if c >= min_support and seq != std_seq
    ]

    simple_pool = [seq for seq, _ in candidates if len(seq) <= len(std_seq)]
    simple_seq = min(simple_pool, key=_tie_key) if simple_pool else None
    if simple_seq is not None:
        approaches.append(
            Approach(
                kind=ApproachKind.SIMPLE,
                sequence=CanonicalSequence(simple_seq, counts[simple_seq]),
                supporting_video_ids=videos_for(simple_seq),
            )
        )

    complex_pool = [
        seq
        for seq, _ in candidates
        if len(seq) >= len(std_seq) and seq != simple_seq
    ]
    if complex_pool:
        complex_seq = min(complex_pool, key=lambda s: (-len(s), s))
        approaches.append(
            Approach(
                kind=ApproachKind.COMPLEX,
                sequence=CanonicalSequence(complex_seq, counts[complex_seq]),
                supporting_video_ids=videos_for(complex_seq),
            )
        )
    return approaches


@dataclass
class DaiResult:
    """Per-cluster output of the full DAI pass."""

    taxonomy: list[str]
    taxonomy_sizes: list[int]
    spans: dict[str, list[StepSpan]]
    sequences: dict[str, tuple[str, ...]]
    approaches: list[Approach]
    flags: dict[str, str]


def run_dai(
    gateway: ModelGateway,
    videos: list[VideoRecord],
    min_support: int | None = None,
    workers: int = 4,
) -> DaiResult:
    """Taxonomy construction, span assignment and approach selection for
    one outcome cluster."""
    build = build_taxonomy(gateway, videos)
    flags: dict[str, str] = {}
    spans: dict[str, list[StepSpan]] = {}

    def assign(video: VideoRecord) -> tuple[str, list[StepSpan] | None]:
        try:
            return video.video_id, assign_steps(gateway, video, build.taxonomy)
        except SchemaError:
            return video.video_id, None

    ordered = sorted(videos, key=lambda v: v.video_id)
    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        for vid, result in pool.map(assign, ordered):
            if result is None:
                flags[vid] = FLAG_STEP_SCHEMA_ERROR
            elif not result:
                flags[vid] = FLAG_NO_STEPS
            else:
                spans[vid] = result

    sequences = {vid: canonical_sequence(s) for vid, s in spans.items()}
    approaches = identify_approaches(sequences, min_support) if sequences else []
    return DaiResult(
        taxonomy=list(build.taxonomy.steps),
        taxonomy_sizes=build.sizes,
        spans=spans,
        sequences=sequences,
        approaches=approaches,
        flags=flags,
    )
