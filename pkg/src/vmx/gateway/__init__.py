"""Model gateway: prompt templates, output schemas, live and scripted backends."""

from .core import (
    Backend,
    GatewayConfig,
    ModelGateway,
    ModelResponse,
    PromptCall,
    SchemaError,
)
from .live import TransportError, downscale_image
from .schemas import PayloadInvalid, schema_for, validate_payload
from .scripted import Script, ScriptRule, ScriptedBackend, UncoveredTemplate, strip_tags
from .templates import (
    TEMPLATES,
    MissingPlaceholder,
    TemplateId,
    render_description_lines,
    render_name_list,
    render_prompt,
    render_transcript,
    render_transcript_blocks,
)

__all__ = [
    "Backend",
    "GatewayConfig",
    "ModelGateway",
    "ModelResponse",
    "PromptCall",
    "SchemaError",
    "TransportError",
    "PayloadInvalid",
    "Script",
    "ScriptRule",
    "ScriptedBackend",
    "UncoveredTemplate",
    "TemplateId",
    "TEMPLATES",
    "MissingPlaceholder",
    "render_prompt",
    "render_transcript",
    "render_transcript_blocks",
    "render_name_list",
    "render_description_lines",
    "schema_for",
    "validate_payload",
    "downscale_image",
    "strip_tags",
]
