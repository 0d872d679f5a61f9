"""Image-generation provider clients.

Protocol (shared by the HTTP client and the in-process mock):
request {prompt, control_image: base64 PNG, style, seed?} -> {image: base64 PNG}.
"""

from __future__ import annotations

import base64
import zlib
from dataclasses import dataclass
from typing import Optional, Protocol

import httpx

from arthomework.canvas.control import png_bytes, png_to_array
from arthomework.canvas.fallback import stylize_array
from arthomework.errors import (
    MalformedReplyError,
    ProviderTimeoutError,
    ProviderTransportError,
)


@dataclass(frozen=True)
class ImageRequest:
    prompt: str
    control_png: bytes
    style: str
    seed: Optional[int] = None


class ImageProvider(Protocol):
    provider_id: str

    def generate(self, request: ImageRequest) -> bytes: ...


class MockImageProvider:
    """Offline provider: deterministic stylization of the control image."""

    provider_id = "mock-image"

    def generate(self, request: ImageRequest) -> bytes:
        raster = png_to_array(request.control_png)
        seed = request.seed
        if seed is None:
            seed = zlib.adler32(
                request.prompt.encode("utf-8") + request.style.encode("utf-8") + request.control_png
            )
        return png_bytes(stylize_array(raster, request.style, seed))


class HttpImageProvider:
    def __init__(self, endpoint: str, timeout_s: float = 60.0) -> None:
        self.provider_id = f"http-image:{endpoint}"
        self._endpoint = endpoint
        self._timeout_s = timeout_s

    def generate(self, request: ImageRequest) -> bytes:
        payload = {
            "prompt": request.prompt,
            "control_image": base64.b64encode(request.control_png).decode("ascii"),
            "style": request.style,
        }
        if request.seed is not None:
            payload["seed"] = request.seed
        try:
            response = httpx.post(self._endpoint, json=payload, timeout=self._timeout_s)
            response.raise_for_status()
        except httpx.TimeoutException as exc:
            raise ProviderTimeoutError(
                f"image provider timed out after {self._timeout_s}s"
            ) from exc
        except httpx.HTTPError as exc:
            raise ProviderTransportError(f"image provider transport failure: {exc}") from exc
        try:
            encoded = response.json()["image"]
            image = base64.b64decode(encoded)
        except Exception as exc:
            raise MalformedReplyError("image provider reply missing base64 image") from exc
        if not image.startswith(b"\x89PNG"):
            raise MalformedReplyError("image provider reply is not a PNG")
        return image
