"""Deterministic scripted backend: a stand-in for the remote model.

Responses are a pure function of (call, rendered prompt, script).  Two
layers:

1. Explicit rules, matched in order.  A rule fires when its template
   matches and, if ``contains`` is set, that string occurs in the rendered
   prompt.  A rule either returns a fixed payload (which may deliberately
   violate the schema) or raises a simulated transport failure.
2. Tag-driven defaults.  Fixture corpora embed markers inside sentence
   text and the backend derives the payload a cooperative model would
   return:

       [OUTCOME]            sentence describes the final result
       [DESC:<text>]        the video's one-line outcome description
       [STEP:<name>]        sentence belongs to step <name>
       [METHOD:<name>]      the enclosing step span uses method <name>
       [ITEM:ingredient:<x>] / [ITEM:tool:<x>]   requirement mentions
       [TIP:<text>]         advice grounded at this sentence
       [SUMMARY:<text>]     clip summary override

Rules win over defaults; ``allow_defaults=False`` turns layer 2 off so an
unmatched template raises UncoveredTemplate.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from .templates import TemplateId


class UncoveredTemplate(Exception):
    """No rule matches and tag-driven defaults are disabled."""


class ScriptedTransportFailure(Exception):
    """Raised by a rule that simulates a backend/network failure."""


@dataclass(frozen=True)
class ScriptRule:
    template_id: TemplateId
    contains: str | None = None
    payload: Any = None
    raise_transport: bool = False

    def matches(self, template_id: TemplateId, prompt: str) -> bool:
        if template_id != self.template_id:
            return False
        return self.contains is None or self.contains in prompt


@dataclass
class Script:
    rules: list[ScriptRule] = field(default_factory=list)
    allow_defaults: bool = True

    @classmethod
    def from_dict(cls, data: dict) -> "Script":
        rules = [
            ScriptRule(
                template_id=TemplateId(raw["template_id"]),
                contains=raw.get("contains"),
                payload=raw.get("payload"),
                raise_transport=bool(raw.get("raise_transport", False)),
            )
            for raw in data.get("rules", [])
        ]
        return cls(rules=rules, allow_defaults=bool(data.get("allow_defaults", True)))

    @classmethod
    def from_file(cls, path: Path) -> "Script":
        return cls.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


_TAG_RE = re.compile(r"\[(OUTCOME|DESC|STEP|METHOD|ITEM|TIP|SUMMARY)(?::([^\]]*))?\]")
_LINE_RE = re.compile(r"^(\d+): (.*)$")


def strip_tags(text: str) -> str:
    return re.sub(r"\s*\[(?:OUTCOME|DESC|STEP|METHOD|ITEM|TIP|SUMMARY)(?::[^\]]*)?\]", "", text).strip()


def _parse_lines(transcript_data: str) -> list[tuple[int, str]]:
    lines = []
    for raw in transcript_data.splitlines():
        m = _LINE_RE.match(raw)
        if m:
            lines.append((int(m.group(1)), m.group(2)))
    return lines


def _parse_blocks(transcripts: str) -> list[tuple[str, list[tuple[int, str]]]]:
    blocks = []
    current_vid = None
    current_lines: list[tuple[int, str]] = []
    for raw in transcripts.splitlines() + [""]:
        if raw.startswith("video_id: "):
            if current_vid is not None:
                blocks.append((current_vid, current_lines))
            current_vid = raw[len("video_id: "):]
            current_lines = []
        elif not raw.strip():
            if current_vid is not None:
                blocks.append((current_vid, current_lines))
                current_vid, current_lines = None, []
        else:
            m = _LINE_RE.match(raw)
            if m and current_vid is not None:
                current_lines.append((int(m.group(1)), m.group(2)))
    return blocks


def _tags(text: str, kind: str) -> list[str]:
    return [m.group(2) or "" for m in _TAG_RE.finditer(text) if m.group(1) == kind]


class ScriptedBackend:
    """Pure, deterministic responder; identical inputs yield identical payloads."""

    def __init__(self, script: Script | None = None):
        self.script = script or Script()

    def complete(self, call, prompt: str):
        for rule in self.script.rules:
            if rule.matches(call.template_id, prompt):
                if rule.raise_transport:
                    raise ScriptedTransportFailure(
                        f"scripted transport failure for {call.template_id.value}"
                    )
                return rule.payload, json.dumps(rule.payload)
        if not self.script.allow_defaults:
            raise UncoveredTemplate(f"no rule covers template {call.template_id.value}")
        payload = self._default(call)
        raw = payload if isinstance(payload, str) else json.dumps(payload)
        return payload, raw

    # --- tag-driven defaults ------------------------------------------------

    def _default(self, call):
        subs = call.substitutions
        tid = call.template_id
        if tid == TemplateId.OUTCOME_SEGMENTS:
            lines = _parse_lines(subs["transcript_data"])
            return {"index": [i for i, text in lines if _tags(text, "OUTCOME")]}
        if tid == TemplateId.OUTCOME_DESC:
            return self._describe(subs["transcript_data"])
        if tid == TemplateId.OUTCOME_CLUSTER:
            descs = []
            for raw in subs["outcome_descriptions"].splitlines():
                _, _, text = raw.partition(": ")
                if text and text not in descs:
                    descs.append(text)
            return {"clusters": descs}
        if tid == TemplateId.OUTCOME_ASSIGN:
            options = json.loads(subs["outcome_types"])
            desc = subs["outcome_description"]
            return {"outcome": desc if desc in options else options[0]}
        if tid == TemplateId.REQUIREMENTS:
            return self._requirements(subs["transcript_data"])
        if tid == TemplateId.STEP_IDENTIFY:
            known = list(json.loads(subs["original_step"]))
            for _, text in _parse_lines(subs["transcript_data"]):
                for name in _tags(text, "STEP"):
                    if name not in known:
                        known.append(name)
            return {"steps": known}
        if tid == TemplateId.STEP_ASSIGN:
            return {"steps": self._spans(subs["transcript_data"])}
        if tid == TemplateId.METHOD_CLUSTER:
            names: list[str] = []
            for _, lines in _parse_blocks(subs["transcripts"]):
                for _, text in lines:
                    for name in _tags(text, "METHOD"):
                        if name not in names:
                            names.append(name)
            return {"clusters": names or [f"Using {subs['step_name']}"]}
        if tid == TemplateId.METHOD_ASSIGN:
            options = json.loads(subs["variation"])
            for _, text in _parse_lines(subs["transcript"]):
                for name in _tags(text, "METHOD"):
                    if name in options:
                        return {"method": name}
            return {"method": options[0]}
        if tid == TemplateId.TIPS:
            return self._tips(subs["transcripts"])
        if tid == TemplateId.CLIP_SUMMARY:
            return self._summary(subs["transcript_data"])
        raise UncoveredTemplate(f"no default for template {tid.value}")

    def _describe(self, transcript_data: str) -> str:
        lines = _parse_lines(transcript_data)
        for _, text in lines:
            descs = _tags(text, "DESC")
            if descs:
                return descs[0]
        for _, text in lines:
            if _tags(text, "OUTCOME"):
                return strip_tags(text)
        return "An unspecified outcome."

    def _requirements(self, transcript_data: str) -> dict:
        ingredients: list[str] = []
        tools: list[str] = []
        for _, text in _parse_lines(transcript_data):
            for tag in _tags(text, "ITEM"):
                kind, _, name = tag.partition(":")
                bucket = ingredients if kind == "ingredient" else tools
                if name and name not in bucket:
                    bucket.append(name)
        return {"ingredients": ingredients, "tools and equipment": tools}

    def _spans(self, transcript_data: str) -> list[dict]:
        spans = []
        current: dict | None = None
        for idx, text in _parse_lines(transcript_data):
            names = _tags(text, "STEP")
            name = names[0] if names else None
            if current is not None and (name != current["step_name"] or idx != current["sentence_end"] + 1):
                spans.append(current)
                current = None
            if name is not None and current is None:
                current = {"step_name": name, "sentence_start": idx, "sentence_end": idx}
            elif name is not None:
                current["sentence_end"] = idx
        if current is not None:
            spans.append(current)
        return spans

    def _tips(self, transcripts: str) -> dict:
        found: dict[str, list[dict]] = {}
        order: list[str] = []
        for vid, lines in _parse_blocks(transcripts):
            for idx, text in lines:
                for tip in _tags(text, "TIP"):
                    if tip not in found:
                        found[tip] = []
                        order.append(tip)
                    found[tip].append({"video_id": vid, "start_index": idx, "end_index": idx})
        ranked = sorted(order, key=lambda t: (-len(found[t]), t))[:3]
        return {"tips": [{"tip": t, "videos": found[t]} for t in ranked]}

    def _summary(self, transcript_data: str) -> str:
        lines = _parse_lines(transcript_data)
        for _, text in lines:
            overrides = _tags(text, "SUMMARY")
            if overrides:
                return overrides[0]
        for _, text in lines:
            clean = strip_tags(text)
            if clean:
                return clean
        return "Clip segment."
