"""Control-image rendering: segment map -> palette-coded raster -> PNG."""

from __future__ import annotations

import io

import numpy as np
from PIL import Image

from arthomework.canvas.catalog import BrushCatalog
from arthomework.canvas.geometry import inside_mask
from arthomework.canvas.segments import SegmentMap


def render_control_array(segment_map: SegmentMap, catalog: BrushCatalog) -> np.ndarray:
    """(H, W, 3) uint8 raster: background color, overpainted in z order.

    Painting regions in ascending z leaves the top-most covering region's
    palette color at every pixel, which is the whole contract.
    """

    raster = np.empty((segment_map.height, segment_map.width, 3), dtype=np.uint8)
    raster[:, :] = catalog.background_color
    for region in sorted(segment_map.regions, key=lambda r: r.z_order):
        color = catalog.color_for(region.concept)
        mask = inside_mask(region.polygon, segment_map.width, segment_map.height)
        raster[mask] = color
    return raster


def png_bytes(raster: np.ndarray) -> bytes:
    buffer = io.BytesIO()
    Image.fromarray(raster, mode="RGB").save(buffer, format="PNG")
    return buffer.getvalue()


def png_to_array(data: bytes) -> np.ndarray:
    with Image.open(io.BytesIO(data)) as image:
        return np.asarray(image.convert("RGB"), dtype=np.uint8)


def render_control_image(segment_map: SegmentMap, catalog: BrushCatalog) -> bytes:
    """PNG-encoded control image; deterministic for identical inputs."""

    return png_bytes(render_control_array(segment_map, catalog))
