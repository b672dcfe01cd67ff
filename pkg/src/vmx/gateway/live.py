"""Remote vision-language-model backend (OpenAI-compatible chat API).

Structured outputs are requested through function calling with the
declared schema; free-text templates read the plain message content.
Frames are attached as base64 data URLs after downscaling.  Credentials
and endpoint come from MODEL_API_KEY / MODEL_BASE_URL.
"""

from __future__ import annotations

import base64
import io
import json
import logging
import os
import threading
import time
from pathlib import Path

import httpx

from . import schemas
from .templates import TemplateId

log = logging.getLogger(__name__)

DEFAULT_BASE_URL = "https://api.openai.com/v1"


class TransportError(Exception):
    """Network or backend failure; retried by the gateway, then surfaced."""


class _RateLimiter:
    """Serializes calls so at most rate_limit requests start per minute."""

    def __init__(self, calls_per_minute: float):
        self._interval = 60.0 / calls_per_minute if calls_per_minute > 0 else 0.0
        self._lock = threading.Lock()
        self._next_at = 0.0

    def wait(self) -> None:
        if self._interval <= 0:
            return
        with self._lock:
            now = time.monotonic()
            delay = self._next_at - now
            self._next_at = max(now, self._next_at) + self._interval
        if delay > 0:
            time.sleep(delay)


def downscale_image(data: bytes, max_px: int) -> bytes:
    """Re-encode as JPEG with the long side capped at max_px."""
    from PIL import Image

    with Image.open(io.BytesIO(data)) as img:
        img = img.convert("RGB")
        img.thumbnail((max_px, max_px))
        buf = io.BytesIO()
        img.save(buf, format="JPEG", quality=85)
        return buf.getvalue()


class LiveBackend:
    def __init__(self, config, transport: httpx.BaseTransport | None = None):
        self.config = config
        api_key = os.environ.get("MODEL_API_KEY", "")
        if not api_key and transport is None:
            raise TransportError("MODEL_API_KEY is not set")
        base_url = os.environ.get("MODEL_BASE_URL", DEFAULT_BASE_URL).rstrip("/")
        self._client = httpx.Client(
            base_url=base_url,
            headers={"Authorization": f"Bearer {api_key}"},
            timeout=120.0,
            transport=transport,
        )
        self._limiter = _RateLimiter(config.rate_limit)

    def close(self) -> None:
        self._client.close()

    def complete(self, call, prompt: str):
        content: list[dict] = [{"type": "text", "text": prompt}]
        for frame in call.images:
            encoded = self._encode_frame(frame)
            if encoded:
                content.append({"type": "image_url", "image_url": {"url": encoded}})
        body: dict = {
            "model": self.config.model_name,
            "temperature": self.config.temperature,
            "messages": [{"role": "user", "content": content}],
        }
        schema_id = call.schema_id
        structured = schema_id not in schemas.TEXT_SCHEMAS
        if structured:
            body["tools"] = [
                {
                    "type": "function",
                    "function": {
                        "name": schema_id,
                        "parameters": schemas.schema_for(schema_id, call.enum_options),
                    },
                }
            ]
            body["tool_choice"] = {"type": "function", "function": {"name": schema_id}}

        self._limiter.wait()
        try:
            response = self._client.post("/chat/completions", json=body)
        except httpx.HTTPError as exc:
            raise TransportError(f"model request failed: {exc}") from exc
        if response.status_code != 200:
            raise TransportError(
                f"model request returned {response.status_code}: {response.text[:500]}"
            )
        data = response.json()
        try:
            message = data["choices"][0]["message"]
            if structured:
                raw = message["tool_calls"][0]["function"]["arguments"]
                return json.loads(raw), raw
            raw = message["content"] or ""
            return raw.strip(), raw
        except (KeyError, IndexError, TypeError, json.JSONDecodeError) as exc:
            raise TransportError(f"unexpected model response shape: {exc}") from exc

    def _encode_frame(self, frame) -> str | None:
        path = Path(frame.uri)
        if not path.is_absolute() and self.config.asset_root is not None:
            path = Path(self.config.asset_root) / path
        try:
            data = path.read_bytes()
        except OSError:
            log.warning("frame asset %s unreadable; skipping attachment", frame.uri)
            return None
        try:
            data = downscale_image(data, self.config.image_max_px)
        except Exception:
            log.warning("frame asset %s not decodable; sending raw bytes", frame.uri)
        return "data:image/jpeg;base64," + base64.b64encode(data).decode("ascii")
