"""Synthetic tagged corpora for the scripted backend, demos and tests.

Each generated video embeds the scripted backend's markers directly in
its narration ([STEP:..], [METHOD:..], [ITEM:kind:..], [TIP:..],
[OUTCOME], [DESC:..]), so a full pipeline run needs no network and is
reproducible bit-for-bit.  The plan objects this module returns double as
ground truth: tests derive expected taxonomies, sequences, items and tips
from the plans rather than from the rendered text.
"""

from __future__ import annotations

import io
import json
from dataclasses import dataclass, field
from pathlib import Path

SENTENCE_SECONDS = 4.0
SENTENCE_SPAN = 3.5

TASK_NAME = "Make Gnocchi"
CATEGORY = "Food and Entertaining"

_STEP_LINES = {
    "Make Dough": "Mash the potatoes and fold in the flour until a soft dough forms",
    "Chill Dough": "Wrap the dough and let it rest in the fridge for a while",
    "Shape Gnocchi": "Roll the dough into ropes and cut little pillows",
    "Boil Gnocchi": "Drop the gnocchi into the water and wait until they float",
    "Bake Gnocchi": "Spread the gnocchi on the tray and into the oven they go",
    "Make Sauce": "While that cooks, we bring the sauce together",
    "Garnish Plate": "A little green on top makes all the difference",
    "Serve Dish": "Plate everything up while it is still hot",
}


@dataclass
class StepPlan:
    name: str
    method: str | None = None
    items: list[tuple[str, str]] = field(default_factory=list)  # (kind, name)
    tips: list[str] = field(default_factory=list)
    extra_lines: list[str] = field(default_factory=list)  # appended tagged sentences


@dataclass
class VideoPlan:
    video_id: str
    outcome_desc: str
    steps: list[StepPlan]
    degraded: bool = False
    playback_ref: str = ""

    def __post_init__(self):
        if not self.playback_ref:
            self.playback_ref = f"https://videos.example/{self.video_id}"

    @property
    def step_sequence(self) -> tuple[str, ...]:
        return tuple(s.name for s in self.steps)


def _sentences_for(plan: VideoPlan) -> list[str]:
    lines = [f"Hello everyone, welcome to video {plan.video_id} where we make gnocchi from scratch."]
    for step in plan.steps:
        tags = [f"[STEP:{step.name}]"]
        if step.method:
            tags.append(f"[METHOD:{step.method}]")
        for kind, name in step.items:
            tags.append(f"[ITEM:{kind}:{name}]")
        base = _STEP_LINES.get(step.name, f"Time to {step.name.lower()}")
        lines.append(f"{base}. {' '.join(tags)}")
        second = f"Keep going until this part looks right. [STEP:{step.name}]"
        for tip in step.tips:
            second += f" [TIP:{tip}]"
        lines.append(second)
        for extra in step.extra_lines:
            lines.append(f"{extra} [STEP:{step.name}]")
    lines.append(f"Look how delicious this turned out. [OUTCOME] [DESC:{plan.outcome_desc}]")
    lines.append("That is the final result, thanks for watching. [OUTCOME]")
    lines.append("Please subscribe and see you next time.")
    return lines


_JPEG_STUB: bytes | None = None


def _jpeg_stub() -> bytes:
    global _JPEG_STUB
    if _JPEG_STUB is None:
        from PIL import Image

        buf = io.BytesIO()
        Image.new("RGB", (8, 8), (180, 140, 90)).save(buf, format="JPEG")
        _JPEG_STUB = buf.getvalue()
    return _JPEG_STUB


def write_video(plan: VideoPlan, dest: Path, task_name: str = TASK_NAME) -> dict:
    """Write one transcript (and frame dir unless degraded); returns the
    manifest entry."""
    dest = Path(dest)
    texts = _sentences_for(plan)
    sentences = [
        {
            "index": i,
            "text": text,
            "start_s": i * SENTENCE_SECONDS,
            "end_s": i * SENTENCE_SECONDS + SENTENCE_SPAN,
        }
        for i, text in enumerate(texts)
    ]
    transcript = {
        "video_id": plan.video_id,
        "task_name": task_name,
        "category": CATEGORY,
        "playback_ref": plan.playback_ref,
        "sentences": sentences,
    }
    transcripts_dir = dest / "transcripts"
    transcripts_dir.mkdir(parents=True, exist_ok=True)
    (transcripts_dir / f"{plan.video_id}.json").write_text(
        json.dumps(transcript, indent=2) + "\n", encoding="utf-8"
    )
    entry = {
        "transcript": f"transcripts/{plan.video_id}.json",
        "playback_ref": plan.playback_ref,
    }
    if not plan.degraded:
        frames_dir = dest / "frames" / plan.video_id
        frames_dir.mkdir(parents=True, exist_ok=True)
        duration = int(sentences[-1]["end_s"]) + 1
        stub = _jpeg_stub()
        for t in range(0, duration + 1):
            (frames_dir / f"{plan.video_id}_{t:04d}.jpg").write_bytes(stub)
        entry["frames_dir"] = f"frames/{plan.video_id}"
    return entry


def write_corpus(plans: list[VideoPlan], dest: Path, task_name: str = TASK_NAME) -> Path:
    """Write transcripts, frames and the task manifest; returns manifest path."""
    dest = Path(dest)
    dest.mkdir(parents=True, exist_ok=True)
    entries = [write_video(plan, dest, task_name) for plan in plans]
    manifest = {"task_name": task_name, "videos": entries}
    path = dest / "manifest.json"
    path.write_text(json.dumps(manifest, indent=2) + "\n", encoding="utf-8")
    return path


CLUSTER_CREAMY = "Creamy Potato Gnocchi"
CLUSTER_BAKED = "Crispy Baked Gnocchi"


def _creamy_steps(kind: str, idx: int) -> list[StepPlan]:
    egg = ("ingredient", "egg" if idx % 2 else "eggs")
    dough = StepPlan(
        "Make Dough",
        method="Mixing by hand" if idx % 3 else "Mixing with stand mixer",
        items=[("ingredient", "potatoes"), ("ingredient", "flour"), egg],
        tips=["Do not overwork the dough"] if idx <= 2 else [],
    )
    shape = StepPlan(
        "Shape Gnocchi",
        method="Rolling with fork" if idx % 2 else "Rolling by hand",
        items=[("tool", "fork")],
    )
    boil = StepPlan(
        "Boil Gnocchi",
        method="Using stove pot" if idx <= 5 else "Using pressure cooker",
        items=[("tool", "pot")],
        tips=["Salt the water generously"] if idx <= 4 else [],
    )
    sauce = StepPlan(
        "Make Sauce",
        method="Simmering cream sauce",
        items=[("ingredient", "cream"), ("tool", "saucepan")],
    )
    if idx == 1:
        dough.extra_lines.append("Now add just a pinch of salt to the mix. [ITEM:ingredient:salt]")
    if kind == "standard":
        return [dough, shape, boil, sauce]
    if kind == "simple":
        return [dough, shape, boil]
    if kind == "noise":
        return [dough, shape, sauce]
    return [  # complex
        dough,
        StepPlan("Chill Dough", method="Chilling in fridge", items=[("tool", "plastic wrap")]),
        shape,
        boil,
        sauce,
        StepPlan("Garnish Plate", method="Garnishing with herbs", items=[("ingredient", "parsley")]),
    ]


def _baked_steps(kind: str, idx: int) -> list[StepPlan]:
    dough = StepPlan(
        "Make Dough",
        method="Mixing by hand",
        items=[("ingredient", "potatoes"), ("ingredient", "flour")],
        tips=["Do not overwork the dough"] if idx == 1 else [],
    )
    shape = StepPlan("Shape Gnocchi", method="Rolling with fork", items=[("tool", "fork")])
    bake = StepPlan(
        "Bake Gnocchi",
        method="Baking in oven" if idx <= 7 else "Baking in air fryer",
        items=[("tool", "oven"), ("tool", "baking tray"), ("ingredient", "olive oil")],
        tips=["Preheat the oven fully"] if idx <= 3 else [],
    )
    serve = StepPlan("Serve Dish", method="Serving with sauce", items=[("ingredient", "parsley")])
    if kind == "standard":
        return [dough, shape, bake, serve]
    if kind == "simple":
        return [dough, shape, bake]
    return [  # complex
        dough,
        StepPlan("Chill Dough", method="Chilling in fridge", items=[("tool", "plastic wrap")]),
        shape,
        bake,
        StepPlan("Make Sauce", method="Simmering cream sauce", items=[("ingredient", "cream")]),
        serve,
    ]


def sample_plans() -> list[VideoPlan]:
    """24 videos, two outcome clusters, three approaches each.

    Cluster layout (exact sequences, so approach selection is knowable):
      creamy: 7 standard, 3 simple, 2 complex, 2 noise (dough/shape/sauce)
      baked:  6 standard, 2 simple, 2 complex
    One video per cluster is degraded (no frames).
    """
    plans: list[VideoPlan] = []
    creamy_kinds = ["standard"] * 7 + ["simple"] * 3 + ["complex"] * 2 + ["noise"] * 2
    for i, kind in enumerate(creamy_kinds, start=1):
        plans.append(
            VideoPlan(
                video_id=f"a{i:02d}",
                outcome_desc=CLUSTER_CREAMY,
                steps=_creamy_steps(kind, i),
                degraded=(i == 5),
            )
        )
    baked_kinds = ["standard"] * 6 + ["simple"] * 2 + ["complex"] * 2
    for i, kind in enumerate(baked_kinds, start=1):
        plans.append(
            VideoPlan(
                video_id=f"b{i:02d}",
                outcome_desc=CLUSTER_BAKED,
                steps=_baked_steps(kind, i),
                degraded=(i == 4),
            )
        )
    return plans


def small_plans() -> list[VideoPlan]:
    """6 videos / 2 clusters; the robustness-fixture shape."""
    plans = []
    for i in range(1, 4):
        plans.append(
            VideoPlan(
                video_id=f"r{i:02d}",
                outcome_desc=CLUSTER_CREAMY,
                steps=_creamy_steps("standard" if i < 3 else "simple", i),
            )
        )
    for i in range(4, 7):
        plans.append(
            VideoPlan(
                video_id=f"r{i:02d}",
                outcome_desc=CLUSTER_BAKED,
                steps=_baked_steps("standard" if i < 6 else "simple", i),
            )
        )
    return plans
