"""Per-step method variation mining: cluster, assign, tips, clip summaries.

For every step of an outcome cluster we gather all grounded spans across
that cluster's videos, let the model name up to three tool/technique
variations, place each span into exactly one variation, then pull
grounded tips and a one-sentence summary per clip for the snippet
switcher.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

from .corpus import Corpus
from .dai import StepSpan
from .gateway import (
    ModelGateway,
    PromptCall,
    SchemaError,
    TemplateId,
    render_name_list,
    render_transcript,
    render_transcript_blocks,
)

log = logging.getLogger(__name__)

FLAG_METHOD_FALLBACK = "method_assignment_fallback"

SUMMARY_FALLBACK_CHARS = 120


@dataclass(frozen=True)
class TipGrounding:
    video_id: str
    sentence_start: int
    sentence_end: int


@dataclass
class Tip:
    text: str
    groundings: list[TipGrounding]


@dataclass
class MethodCluster:
    step_name: str
    name: str
    member_spans: list[StepSpan] = field(default_factory=list)
    clip_summaries: dict[tuple[str, int, int], str] = field(default_factory=dict)
    tips: list[Tip] = field(default_factory=list)


@dataclass
class StepMethods:
    step_name: str
    clusters: list[MethodCluster]
    description: str = ""
    flags: dict[str, str] = field(default_factory=dict)


def _span_sentences(span: StepSpan, corpus: Corpus):
    video = corpus.videos[span.video_id]
    return video.sentences[span.sentence_start : span.sentence_end + 1]


def _blocks_for(spans: list[StepSpan], corpus: Corpus) -> str:
    return render_transcript_blocks(
        [(span.video_id, _span_sentences(span, corpus)) for span in spans]
    )


def cluster_methods(
    gateway: ModelGateway,
    task_name: str,
    step_name: str,
    spans: list[StepSpan],
    corpus: Corpus,
) -> list[str]:
    """1-3 variation names for one step; falls back to a single cluster
    named after the step when the model cannot produce a valid list."""
    if not spans:
        raise ValueError("cluster_methods needs at least one span")
    try:
        response = gateway.call(
            PromptCall(
                template_id=TemplateId.METHOD_CLUSTER,
                substitutions={
                    "task_name": task_name,
                    "step_name": step_name,
                    "transcripts": _blocks_for(spans, corpus),
                },
            )
        )
    except SchemaError:
        log.warning("method clustering failed for step %r; single fallback cluster", step_name)
        return [step_name]
    names = list(response.payload["clusters"])
    leading = {n.split(" ", 1)[0].lower() for n in names}
    if len(leading) > 1:
        # advisory only: the prompt asks for a shared action word
        log.info("method clusters for %r do not share a leading action word: %s", step_name, names)
    return names


def assign_method(
    gateway: ModelGateway,
    task_name: str,
    step_name: str,
    span: StepSpan,
    corpus: Corpus,
    cluster_names: list[str],
) -> str | None:
    """Variation for one span, or None when assignment failed (the caller
    places the span in the largest cluster and flags it)."""
    if not cluster_names:
        raise ValueError("cluster_names must be non-empty")
    if len(cluster_names) == 1:
        return cluster_names[0]
    try:
        response = gateway.call(
            PromptCall(
                template_id=TemplateId.METHOD_ASSIGN,
                substitutions={
                    "step_name": step_name,
                    "variation": render_name_list(cluster_names),
                    "transcript": render_transcript(_span_sentences(span, corpus)),
                },
                enum_options=tuple(cluster_names),
            )
        )
    except SchemaError:
        return None
    return response.payload["method"]


def _clip_grounding(
    grounding: TipGrounding, member_spans: list[StepSpan]
) -> TipGrounding | None:
    """Clip a grounding to the best-overlapping member span of its video."""
    best: tuple[int, StepSpan] | None = None
    for span in member_spans:
        if span.video_id != grounding.video_id:
            continue
        lo = max(grounding.sentence_start, span.sentence_start)
        hi = min(grounding.sentence_end, span.sentence_end)
        overlap = hi - lo + 1
        if overlap > 0 and (best is None or overlap > best[0]):
            best = (overlap, span)
    if best is None:
        return None
    span = best[1]
    return TipGrounding(
        video_id=grounding.video_id,
        sentence_start=max(grounding.sentence_start, span.sentence_start),
        sentence_end=min(grounding.sentence_end, span.sentence_end),
    )


def extract_tips(
    gateway: ModelGateway,
    task_name: str,
    step_name: str,
    member_spans: list[StepSpan],
    corpus: Corpus,
) -> list[Tip]:
    """Up to three grounded tips for one method.

    Groundings are clipped to the method's member spans; a tip whose every
    grounding falls outside them is dropped.  No tips is a valid outcome.
    """
    if not member_spans:
        raise ValueError("extract_tips needs at least one member span")
    try:
        response = gateway.call(
            PromptCall(
                template_id=TemplateId.TIPS,
                substitutions={
                    "task_name": task_name,
                    "step_name": step_name,
                    "transcripts": _blocks_for(member_spans, corpus),
                },
            )
        )
    except SchemaError:
        return []
    tips = []
    for raw in response.payload["tips"]:
        groundings = []
        for v in raw["videos"]:
            clipped = _clip_grounding(
                TipGrounding(
                    video_id=v["video_id"],
                    sentence_start=int(v["start_index"]),
                    sentence_end=int(v["end_index"]),
                ),
                member_spans,
            )
            if clipped is not None:
                groundings.append(clipped)
        if groundings:
            tips.append(Tip(text=raw["tip"], groundings=groundings))
    return tips[:3]


def summarize_clip(gateway: ModelGateway, span: StepSpan, corpus: Corpus) -> str:
    """One-sentence summary of a clip; deterministic fallback guarantees a
    non-empty string even when the model call fails."""
    sentences = _span_sentences(span, corpus)
    video = corpus.videos[span.video_id]
    try:
        response = gateway.call(
            PromptCall(
                template_id=TemplateId.CLIP_SUMMARY,
                substitutions={
                    "task_name": video.task_name,
                    "transcript_data": render_transcript(sentences),
                },
            )
        )
        text = response.payload
    except SchemaError:
        text = ""
    if text:
        return text
    return sentences[0].text[:SUMMARY_FALLBACK_CHARS]


def build_step_methods(
    gateway: ModelGateway,
    task_name: str,
    step_name: str,
    spans: list[StepSpan],
    corpus: Corpus,
    description_spans: list[StepSpan] | None = None,
) -> StepMethods:
    """Full method pass for one (outcome cluster, step).

    ``description_spans`` narrows the step-description source to the
    standard approach's spans when the caller has them.
    """
    names = cluster_methods(gateway, task_name, step_name, spans, corpus)
    clusters = {name: MethodCluster(step_name=step_name, name=name) for name in names}
    flags: dict[str, str] = {}

    unassigned: list[StepSpan] = []
    for span in sorted(spans, key=lambda s: (s.video_id, s.sentence_start)):
        name = assign_method(gateway, task_name, step_name, span, corpus, names)
        if name is None:
            unassigned.append(span)
        else:
            clusters[name].member_spans.append(span)
    for span in unassigned:
        largest = max(names, key=lambda n: (len(clusters[n].member_spans), -names.index(n)))
        clusters[largest].member_spans.append(span)
        flags[f"{span.video_id}:{span.sentence_start}"] = FLAG_METHOD_FALLBACK

    ordered = [clusters[name] for name in names if clusters[name].member_spans]
    for cluster in ordered:
        cluster.member_spans.sort(key=lambda s: (s.video_id, s.sentence_start))
        cluster.tips = extract_tips(gateway, task_name, step_name, cluster.member_spans, corpus)
        for span in cluster.member_spans:
            key = (span.video_id, span.sentence_start, span.sentence_end)
            cluster.clip_summaries[key] = summarize_clip(gateway, span, corpus)

    description = describe_step(gateway, step_name, description_spans or spans, corpus)
    return StepMethods(step_name=step_name, clusters=ordered, description=description, flags=flags)


def describe_step(
    gateway: ModelGateway, step_name: str, spans: list[StepSpan], corpus: Corpus
) -> str:
    """One-line step description for the overview list, produced from the
    step's spans (standard-approach spans when the caller pre-filters)."""
    source = sorted(spans, key=lambda s: (s.video_id, s.sentence_start))[:2]
    sentences = [s for span in source for s in _span_sentences(span, corpus)]
    if not sentences:
        return step_name
    video = corpus.videos[source[0].video_id]
    try:
        response = gateway.call(
            PromptCall(
                template_id=TemplateId.CLIP_SUMMARY,
                substitutions={
                    "task_name": video.task_name,
                    "transcript_data": render_transcript(sentences),
                },
            )
        )
        text = response.payload
    except SchemaError:
        text = ""
    return text or sentences[0].text[:SUMMARY_FALLBACK_CHARS]
