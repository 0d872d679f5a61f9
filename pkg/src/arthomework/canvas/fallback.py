"""Deterministic offline renderer used when no image provider is reachable.

Not a diffusion model: it dresses the control raster in a style-dependent
texture so the client still sees a stylized preview. Same inputs produce
byte-identical PNGs, which the offline test suite relies on.
"""

from __future__ import annotations

import zlib

import numpy as np

from arthomework.canvas.catalog import BrushCatalog
from arthomework.canvas.control import png_bytes, render_control_array
from arthomework.canvas.segments import SegmentMap


def _seed_for(style: str, raster: np.ndarray) -> int:
    return zlib.adler32(style.encode("utf-8") + raster.tobytes())


def _box_blur(raster: np.ndarray, passes: int = 2) -> np.ndarray:
    out = raster.astype(np.float32)
    for _ in range(passes):
        acc = out.copy()
        acc[1:] += out[:-1]
        acc[:-1] += out[1:]
        acc[:, 1:] += out[:, :-1]
        acc[:, :-1] += out[:, 1:]
        out = acc / 5.0
    return out


def _edges(raster: np.ndarray) -> np.ndarray:
    gray = raster.astype(np.float32).mean(axis=2)
    gx = np.zeros_like(gray)
    gy = np.zeros_like(gray)
    gx[:, 1:] = np.abs(gray[:, 1:] - gray[:, :-1])
    gy[1:, :] = np.abs(gray[1:, :] - gray[:-1, :])
    return np.clip(gx + gy, 0, 255)


def stylize_array(raster: np.ndarray, style: str, seed: int | None = None) -> np.ndarray:
    rng = np.random.default_rng(_seed_for(style, raster) if seed is None else seed)
    key = style.strip().lower()

    if key == "sketch":
        edges = _edges(raster)
        sketch = np.full(raster.shape[:2], 245.0, dtype=np.float32) - edges * 0.8
        return np.clip(sketch, 0, 255).astype(np.uint8)[:, :, None].repeat(3, axis=2)

    if key == "oil painting":
        quantized = (raster // 32) * 32 + 16
        noise = rng.integers(-10, 11, size=raster.shape)
        return np.clip(quantized.astype(np.int16) + noise, 0, 255).astype(np.uint8)

    if key == "flat illustration":
        return raster.copy()

    # watercolor painting and anything unregistered: soft wash with grain
    washed = _box_blur(raster, passes=2)
    grain = rng.normal(0.0, 6.0, size=raster.shape)
    return np.clip(washed + grain, 0, 255).astype(np.uint8)


def fallback_render(
    segment_map: SegmentMap,
    catalog: BrushCatalog,
    style: str,
    seed: int | None = None,
) -> bytes:
    """PNG the size of the canvas; pure function of (map, catalog, style, seed)."""

    raster = render_control_array(segment_map, catalog)
    return png_bytes(stylize_array(raster, style, seed))
