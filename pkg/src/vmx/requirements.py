"""Per-video requirement extraction and per-approach frequency tallies.

The model is instructed to strip quantities and descriptors; on top of
that a deterministic local fold (case + naive plural) merges spelling
variants so counts stay stable.  Tallies are sorted by frequency for the
UI, which shades common items darker.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum

from .corpus import VideoRecord, frames_in_window
from .gateway import ModelGateway, PromptCall, TemplateId, render_transcript

log = logging.getLogger(__name__)

FLAG_NO_REQUIREMENTS = "requirements_failed"

FRAME_STRIDE_S = 5.0


class ItemKind(str, Enum):
    INGREDIENT = "INGREDIENT"
    TOOL = "TOOL"


@dataclass
class RequirementSet:
    video_id: str
    ingredients: list[str]
    tools: list[str]


@dataclass
class TallyItem:
    name: str
    kind: ItemKind
    count: int
    fraction: float


@dataclass
class RequirementTally:
    approach_key: str
    items: list[TallyItem]


def normalize_entry(name: str) -> str:
    """Lowercase, trim and collapse whitespace.  Idempotent."""
    return " ".join(name.lower().split())


def merge_key(name: str) -> str:
    """Fold singular/plural spellings onto one key (naive trailing-'s')."""
    name = normalize_entry(name)
    if name.endswith("s") and not name.endswith("ss") and len(name) > 3:
        return name[:-1]
    return name


def shade_bucket(fraction: float) -> str:
    """UI shading: the more videos use an item, the darker its chip."""
    if fraction >= 0.75:
        return "dark"
    if fraction >= 0.4:
        return "medium"
    return "light"


def extract_requirements(gateway: ModelGateway, video: VideoRecord) -> RequirementSet:
    """Ingredients and tools narrated or shown in one video.

    Frames are sampled at 5-second intervals over the whole video;
    degraded videos go transcript-only.  A schema failure yields an empty
    set (the caller records the flag).
    """
    frames = frames_in_window(video, 0.0, video.duration_s, FRAME_STRIDE_S)
    response = gateway.call(
        PromptCall(
            template_id=TemplateId.REQUIREMENTS,
            substitutions={
                "visual_frames": "",
                "task_name": video.task_name,
                "transcript_data": render_transcript(video.sentences),
            },
            images=tuple(frames),
        )
    )
    payload = response.payload

    def cleaned(values: list[str]) -> list[str]:
        out: list[str] = []
        for value in values:
            norm = normalize_entry(value)
            if norm and norm not in out:
                out.append(norm)
        return out

    return RequirementSet(
        video_id=video.video_id,
        ingredients=cleaned(payload["ingredients"]),
        tools=cleaned(payload["tools and equipment"]),
    )


def tally_requirements(
    sets: list[RequirementSet], supporting_ids: set[str], approach_key: str = ""
) -> RequirementTally:
    """Count, per item, how many supporting videos mention it.

    Spelling variants are merged via merge_key; the displayed name is the
    shortest (then lexicographically first) raw form seen, which prefers
    the singular.
    """
    relevant = [s for s in sets if s.video_id in supporting_ids]
    n = len(supporting_ids)
    buckets: dict[tuple[str, ItemKind], dict] = {}
    for req in relevant:
        for kind, values in ((ItemKind.INGREDIENT, req.ingredients), (ItemKind.TOOL, req.tools)):
            seen_keys = set()
            for value in values:
                key = merge_key(value)
                if (key, kind) not in buckets:
                    buckets[(key, kind)] = {"videos": set(), "forms": set()}
                buckets[(key, kind)]["forms"].add(normalize_entry(value))
                if key not in seen_keys:
                    buckets[(key, kind)]["videos"].add(req.video_id)
                    seen_keys.add(key)

    items = []
    for (key, kind), data in buckets.items():
        count = len(data["videos"])
        display = min(data["forms"], key=lambda f: (len(f), f))
        items.append(
            TallyItem(
                name=display,
                kind=kind,
                count=count,
                fraction=count / n if n else 0.0,
            )
        )
    items.sort(key=lambda it: (-it.count, it.name, it.kind.value))
    return RequirementTally(approach_key=approach_key, items=items)
