"""Polygon geometry for segment regions.

Coverage is defined at pixel centers: pixel (x, y) belongs to a polygon when
the point (x + 0.5, y + 0.5) is inside it by the even-odd (ray crossing)
rule. The acceptance tests check this against an independent scalar
point-in-polygon oracle, so the definition here is the contract.
"""

from __future__ import annotations

import numpy as np

from arthomework.errors import OutOfBoundsError

Point = tuple[float, float]
Polygon = list[Point]


def validate_polygon(polygon: Polygon, width: int, height: int) -> list[Point]:
    points = [(float(x), float(y)) for x, y in polygon]
    if len(points) < 3:
        raise OutOfBoundsError("polygon needs at least 3 vertices", vertex_count=len(points))
    for x, y in points:
        if not (0.0 <= x <= width and 0.0 <= y <= height):
            raise OutOfBoundsError(
                f"vertex ({x}, {y}) outside canvas {width}x{height}",
                vertex=[x, y],
                width=width,
                height=height,
            )
    return points


def inside_mask(polygon: Polygon, width: int, height: int) -> np.ndarray:
    """Boolean (height, width) mask of pixels whose centers fall inside."""

    xs = np.arange(width, dtype=np.float64) + 0.5
    ys = np.arange(height, dtype=np.float64) + 0.5
    grid_x, grid_y = np.meshgrid(xs, ys)
    inside = np.zeros((height, width), dtype=bool)

    count = len(polygon)
    for i in range(count):
        x1, y1 = polygon[i]
        x2, y2 = polygon[(i + 1) % count]
        if y1 == y2:
            continue  # horizontal edge never crosses a horizontal ray
        crosses = (y1 > grid_y) != (y2 > grid_y)
        x_at_y = x1 + (grid_y - y1) * (x2 - x1) / (y2 - y1)
        inside ^= crosses & (grid_x < x_at_y)
    return inside
