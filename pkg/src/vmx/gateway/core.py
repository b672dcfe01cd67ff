"""Typed request/response gateway in front of the model backends.

Every model interaction goes through ModelGateway.call: render the frozen
template, dispatch to the configured backend, validate the payload
against its declared schema, and retry with the violation appended as a
corrective instruction.  Exhausted retries raise SchemaError and the
caller excludes the video (recording it in the run report).
"""

from __future__ import annotations

import json
import logging
import threading
import time
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any

from . import schemas
from .live import LiveBackend, TransportError
from .schemas import DEFAULT_SCHEMA_ID, PayloadInvalid
from .scripted import Script, ScriptedBackend, ScriptedTransportFailure
from .templates import TemplateId, VISUAL_TEMPLATES, render_prompt

log = logging.getLogger(__name__)


class SchemaError(Exception):
    """Backend kept returning schema-invalid payloads; caller must exclude."""

    def __init__(self, template_id: TemplateId, violation: str, attempts: int):
        super().__init__(
            f"{template_id.value}: schema-invalid after {attempts} attempt(s): {violation}"
        )
        self.template_id = template_id
        self.violation = violation
        self.attempts = attempts


class Backend(str, Enum):
    LIVE = "live"
    SCRIPTED = "scripted"


@dataclass
class GatewayConfig:
    backend: Backend = Backend.SCRIPTED
    model_name: str = "gpt-4o-2024-05-13"
    temperature: float = 0.0
    max_retries: int = 3
    rate_limit: float = 60.0  # calls per minute, live backend only
    image_max_px: int = 512
    asset_root: Path | None = None
    max_prompt_chars: int | None = None
    retry_backoff_s: float = 0.0

    def __post_init__(self):
        if self.max_retries < 1:
            raise ValueError("max_retries must be positive")


@dataclass(frozen=True)
class PromptCall:
    """One templated model request.

    ``enum_options`` feeds the choice schemas whose enum is only known at
    call time (outcome and method assignment).
    """

    template_id: TemplateId
    substitutions: dict[str, str]
    images: tuple = ()
    schema_id: str = ""
    enum_options: tuple[str, ...] | None = None

    def __post_init__(self):
        if not self.schema_id:
            object.__setattr__(self, "schema_id", DEFAULT_SCHEMA_ID[self.template_id])
        if self.images and self.template_id not in VISUAL_TEMPLATES:
            raise ValueError(
                f"template {self.template_id.value} does not accept image attachments"
            )


@dataclass
class ModelResponse:
    payload: Any
    raw: str
    attempt_count: int


_CORRECTION = (
    "\n\nYour previous response was rejected: {violation}\n"
    "Return a response that satisfies the required output schema exactly."
)


class ModelGateway:
    """Thread-safe front door; counts backend invocations per template."""

    def __init__(self, config: GatewayConfig, script: Script | None = None, transport=None):
        self.config = config
        if config.backend == Backend.SCRIPTED:
            self._backend = ScriptedBackend(script)
        else:
            self._backend = LiveBackend(config, transport=transport)
        self._counts: dict[str, int] = {}
        self._lock = threading.Lock()

    @property
    def call_counts(self) -> dict[str, int]:
        with self._lock:
            return dict(self._counts)

    def close(self) -> None:
        close = getattr(self._backend, "close", None)
        if close:
            close()

    def call(self, call: PromptCall) -> ModelResponse:
        prompt = render_prompt(call.template_id, call.substitutions)
        if self.config.max_prompt_chars and len(prompt) > self.config.max_prompt_chars:
            log.warning(
                "prompt for %s truncated from %d to %d chars",
                call.template_id.value,
                len(prompt),
                self.config.max_prompt_chars,
            )
            prompt = prompt[: self.config.max_prompt_chars]

        violation: str | None = None
        transport_failures = 0
        attempt = 0
        while attempt < self.config.max_retries:
            attempt += 1
            attempt_prompt = prompt
            if violation:
                attempt_prompt = prompt + _CORRECTION.format(violation=violation)
            try:
                payload, raw = self._dispatch(call, attempt_prompt)
            except (TransportError, ScriptedTransportFailure) as exc:
                transport_failures += 1
                if transport_failures >= self.config.max_retries:
                    raise TransportError(str(exc)) from exc
                attempt -= 1  # transport retries do not consume schema attempts
                if self.config.retry_backoff_s:
                    time.sleep(self.config.retry_backoff_s * transport_failures)
                continue
            try:
                schemas.validate_payload(call.schema_id, payload, call.enum_options)
            except PayloadInvalid as exc:
                violation = str(exc)
                log.debug("attempt %d for %s rejected: %s", attempt, call.template_id.value, violation)
                continue
            payload = self._post_process(call, payload)
            return ModelResponse(payload=payload, raw=raw, attempt_count=attempt)
        raise SchemaError(call.template_id, violation or "unknown violation", attempt)

    def _dispatch(self, call: PromptCall, prompt: str):
        with self._lock:
            self._counts[call.template_id.value] = self._counts.get(call.template_id.value, 0) + 1
        return self._backend.complete(call, prompt)

    def _post_process(self, call: PromptCall, payload):
        # Step taxonomies must never lose a known step: union the model's
        # list with the input list so refinement is monotone.
        if call.template_id == TemplateId.STEP_IDENTIFY:
            original = json.loads(call.substitutions.get("original_step", "[]"))
            merged: list[str] = []
            for name in list(original) + list(payload["steps"]):
                if name and name not in merged:
                    merged.append(name)
            return {"steps": merged}
        if call.schema_id in schemas.TEXT_SCHEMAS and isinstance(payload, str):
            return payload.strip()
        return payload
