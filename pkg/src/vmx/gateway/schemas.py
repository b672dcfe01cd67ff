"""Structured-output schemas for every template, plus payload validation.

Each schema mirrors the function-calling parameter block the model is
asked to fill.  Count bounds that the prompt text states in prose
(2-4 outcome clusters, up to 3 method clusters, top 3 tips) are encoded
here so the gateway can reject and retry out-of-range responses.
"""

from __future__ import annotations

import jsonschema

from .templates import TemplateId


class PayloadInvalid(Exception):
    """Payload does not conform to its declared schema."""


# Free-text outputs (no function call) are validated as non-empty strings.
ONE_SENTENCE = {"type": "string", "minLength": 1}

_STATIC_SCHEMAS: dict[str, dict] = {
    "outcome_segments": {
        "type": "object",
        "properties": {"index": {"type": "array", "items": {"type": "integer"}}},
        "required": ["index"],
    },
    "one_sentence": ONE_SENTENCE,
    "outcome_clusters": {
        "type": "object",
        "properties": {
            "clusters": {
                "type": "array",
                "items": {"type": "string", "minLength": 1},
                "minItems": 2,
                "maxItems": 4,
                "uniqueItems": True,
            }
        },
        "required": ["clusters"],
    },
    "requirements": {
        "type": "object",
        "properties": {
            "ingredients": {"type": "array", "items": {"type": "string"}},
            "tools and equipment": {"type": "array", "items": {"type": "string"}},
        },
        "required": ["ingredients", "tools and equipment"],
    },
    "step_list": {
        "type": "object",
        "properties": {
            "steps": {"type": "array", "items": {"type": "string", "minLength": 1}}
        },
        "required": ["steps"],
    },
    "step_spans": {
        "type": "object",
        "properties": {
            "steps": {
                "type": "array",
                "items": {
                    "type": "object",
                    "properties": {
                        "step_name": {"type": "string"},
                        "sentence_start": {"type": "integer"},
                        "sentence_end": {"type": "integer"},
                    },
                    "required": ["step_name", "sentence_start", "sentence_end"],
                },
            }
        },
        "required": ["steps"],
    },
    "method_clusters": {
        "type": "object",
        "properties": {
            "clusters": {
                "type": "array",
                "items": {"type": "string", "minLength": 1},
                "minItems": 1,
                "maxItems": 3,
                "uniqueItems": True,
            }
        },
        "required": ["clusters"],
    },
    "tips": {
        "type": "object",
        "properties": {
            "tips": {
                "type": "array",
                "maxItems": 3,
                "items": {
                    "type": "object",
                    "properties": {
                        "tip": {"type": "string", "minLength": 1},
                        "videos": {
                            "type": "array",
                            "minItems": 1,
                            "items": {
                                "type": "object",
                                "properties": {
                                    "video_id": {"type": "string"},
                                    "start_index": {"type": "number"},
                                    "end_index": {"type": "number"},
                                },
                                "required": ["video_id", "start_index", "end_index"],
                            },
                        },
                    },
                    "required": ["tip", "videos"],
                },
            }
        },
        "required": ["tips"],
    },
}

# Schemas whose enum membership is only known at call time.
_ENUM_SCHEMAS = {"outcome_choice": "outcome", "method_choice": "method"}

DEFAULT_SCHEMA_ID: dict[TemplateId, str] = {
    TemplateId.OUTCOME_SEGMENTS: "outcome_segments",
    TemplateId.OUTCOME_DESC: "one_sentence",
    TemplateId.OUTCOME_CLUSTER: "outcome_clusters",
    TemplateId.OUTCOME_ASSIGN: "outcome_choice",
    TemplateId.REQUIREMENTS: "requirements",
    TemplateId.STEP_IDENTIFY: "step_list",
    TemplateId.STEP_ASSIGN: "step_spans",
    TemplateId.METHOD_CLUSTER: "method_clusters",
    TemplateId.METHOD_ASSIGN: "method_choice",
    TemplateId.TIPS: "tips",
    TemplateId.CLIP_SUMMARY: "one_sentence",
}

# Templates whose payload arrives as free text rather than a function call.
TEXT_SCHEMAS = frozenset({"one_sentence"})


def schema_for(schema_id: str, enum_options: tuple[str, ...] | None = None) -> dict:
    if schema_id in _STATIC_SCHEMAS:
        return _STATIC_SCHEMAS[schema_id]
    if schema_id in _ENUM_SCHEMAS:
        if not enum_options:
            raise ValueError(f"schema {schema_id} needs enum options")
        key = _ENUM_SCHEMAS[schema_id]
        return {
            "type": "object",
            "properties": {key: {"type": "string", "enum": list(enum_options)}},
            "required": [key],
        }
    raise KeyError(f"unknown schema id {schema_id!r}")


def validate_payload(
    schema_id: str, payload, enum_options: tuple[str, ...] | None = None
) -> None:
    schema = schema_for(schema_id, enum_options)
    validator = jsonschema.Draft202012Validator(schema)
    errors = sorted(validator.iter_errors(payload), key=lambda e: list(e.absolute_path))
    if errors:
        first = errors[0]
        where = "/".join(str(p) for p in first.absolute_path) or "<root>"
        raise PayloadInvalid(f"{schema_id}: at {where}: {first.message}")
