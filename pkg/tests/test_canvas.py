"""Canvas engine: catalog, strokes, control-image rendering, fallback renderer.

The rasterization oracle here is intentionally naive: a pure-Python ray
cast per pixel center, applied per region from the top of the z stack down.
The implementation must agree with it pixel for pixel.
"""

from __future__ import annotations

import numpy as np
import pytest

from arthomework.canvas.catalog import BrushCatalog, default_catalog
from arthomework.canvas.control import png_to_array, render_control_array, render_control_image
from arthomework.canvas.fallback import fallback_render
from arthomework.canvas.segments import (
    SegmentMap,
    canvas_note_text,
    parse_canvas_note,
    parse_draw_event,
    stroke_utterances,
)
from arthomework.core.types import Speaker, UtteranceKind
from arthomework.errors import OutOfBoundsError, UnknownConceptError
from tests.conftest import ts


@pytest.fixture
def catalog():
    return default_catalog()


class TestCatalog:
    def test_default_is_well_formed_and_covers_the_stock_brushes(self, catalog):
        names = set(catalog.concepts())
        assert {"Human", "Cloud", "Ocean", "Grass", "Tree", "Lake", "Flower"} <= names
        assert len(names) == 20

    def test_color_concept_bijection(self, catalog):
        for concept in catalog.concepts():
            assert catalog.concept_for_color(catalog.color_for(concept)) == concept

    def test_duplicate_color_rejected(self):
        with pytest.raises(ValueError):
            BrushCatalog(entries=[("A", (1, 2, 3)), ("B", (1, 2, 3))])

    def test_color_equal_to_background_rejected(self):
        with pytest.raises(ValueError):
            BrushCatalog(entries=[("A", (0, 0, 0))], background_color=(0, 0, 0))

    def test_unknown_concept(self, catalog):
        with pytest.raises(UnknownConceptError):
            catalog.color_for("Spaceship")


class TestCanvasNotes:
    def test_empty_canvas_note(self):
        assert canvas_note_text([]) == "There is nothing on the canvas right now."

    def test_single_concept_uses_an_article(self):
        assert canvas_note_text(["Ocean"]) == "Now there is an ocean on the canvas."

    def test_two_concepts(self):
        assert canvas_note_text(["Grass", "Ocean"]) == "Now there is grass and ocean on the canvas."

    def test_many_concepts_use_oxford_comma(self):
        assert (
            canvas_note_text(["Sky", "Grass", "Ocean"])
            == "Now there is sky, grass, and ocean on the canvas."
        )

    @pytest.mark.parametrize(
        "concepts",
        [[], ["Ocean"], ["Grass", "Ocean"], ["Sky", "Grass", "Ocean"], ["A", "B", "C", "D"]],
    )
    def test_note_round_trip(self, concepts):
        assert parse_canvas_note(canvas_note_text(concepts)) == [c.lower() for c in concepts]

    def test_parse_draw_event_variants(self):
        assert parse_draw_event("I drew the ocean.") == "ocean"
        assert parse_draw_event("I drew grass.") == "grass"
        assert parse_draw_event("I drew mountains.") == "mountains"
        assert parse_draw_event("something else") is None


class TestStrokes:
    def test_first_stroke_produces_the_pinned_pair(self, catalog):
        segment_map = SegmentMap(64, 64)
        region, draw, note = stroke_utterances(
            segment_map, catalog, "Ocean", [(0, 0), (10, 0), (10, 10), (0, 10)], ts(1), ts(1.001)
        )
        assert draw.text == "I drew the ocean."
        assert draw.kind is UtteranceKind.DRAW_EVENT
        assert note.text == "There is nothing on the canvas right now."
        assert note.kind is UtteranceKind.CANVAS_NOTE
        assert note.speaker is Speaker.SYSTEM
        assert len(segment_map.regions) == 1
        assert region.z_order == 0

    def test_second_stroke_notes_prior_content(self, catalog):
        segment_map = SegmentMap(64, 64)
        stroke_utterances(segment_map, catalog, "Ocean", [(0, 0), (10, 0), (10, 10)], ts(1), ts(1.1))
        _, _, note = stroke_utterances(
            segment_map, catalog, "Grass", [(20, 20), (30, 20), (30, 30)], ts(2), ts(2.1)
        )
        assert note.text == "Now there is an ocean on the canvas."

    def test_notes_list_newest_first(self, catalog):
        segment_map = SegmentMap(64, 64)
        for concept in ("Ocean", "Grass", "Sky"):
            stroke_utterances(segment_map, catalog, concept, [(1, 1), (5, 1), (5, 5)], ts(1), ts(1.1))
        _, _, note = stroke_utterances(
            segment_map, catalog, "Mountain", [(1, 1), (5, 1), (5, 5)], ts(2), ts(2.1)
        )
        assert note.text == "Now there is sky, grass, and ocean on the canvas."

    def test_unknown_concept_rejected(self, catalog):
        segment_map = SegmentMap(64, 64)
        with pytest.raises(UnknownConceptError):
            segment_map.add_region(catalog, "Spaceship", [(0, 0), (5, 0), (5, 5)])
        assert segment_map.regions == []

    def test_out_of_bounds_rejected(self, catalog):
        segment_map = SegmentMap(64, 64)
        with pytest.raises(OutOfBoundsError):
            segment_map.add_region(catalog, "Ocean", [(0, 0), (70, 0), (70, 10)])


# --- rasterization oracle ----------------------------------------------------


def _point_in_polygon(x: float, y: float, polygon) -> bool:
    """Naive scalar ray cast; independent of the vectorized implementation."""

    inside = False
    count = len(polygon)
    for i in range(count):
        x1, y1 = polygon[i]
        x2, y2 = polygon[(i + 1) % count]
        if (y1 > y) != (y2 > y):
            x_cross = x1 + (y - y1) * (x2 - x1) / (y2 - y1)
            if x < x_cross:
                inside = not inside
    return inside


def _oracle_raster(segment_map: SegmentMap, catalog: BrushCatalog) -> np.ndarray:
    raster = np.empty((segment_map.height, segment_map.width, 3), dtype=np.uint8)
    raster[:, :] = catalog.background_color
    by_top = sorted(segment_map.regions, key=lambda r: r.z_order, reverse=True)
    for y in range(segment_map.height):
        for x in range(segment_map.width):
            for region in by_top:
                if _point_in_polygon(x + 0.5, y + 0.5, region.polygon):
                    raster[y, x] = catalog.color_for(region.concept)
                    break
    return raster


class TestControlImage:
    def test_empty_map_is_uniform_background(self, catalog):
        raster = render_control_array(SegmentMap(16, 16), catalog)
        assert (raster == np.array(catalog.background_color)).all()

    def test_full_canvas_region_is_uniform_color(self, catalog):
        segment_map = SegmentMap(16, 16)
        segment_map.add_region(catalog, "Ocean", [(0, 0), (16, 0), (16, 16), (0, 16)])
        raster = render_control_array(segment_map, catalog)
        assert (raster == np.array(catalog.color_for("Ocean"))).all()

    def test_overlapping_regions_match_the_oracle(self, catalog):
        segment_map = SegmentMap(24, 20)
        segment_map.add_region(catalog, "Ocean", [(1, 1), (20, 3), (17, 18), (2, 15)])
        segment_map.add_region(catalog, "Grass", [(8, 2), (22, 8), (12, 19)])
        segment_map.add_region(catalog, "Human", [(3, 3), (15, 5), (10, 16), (4, 12)])
        raster = render_control_array(segment_map, catalog)
        assert (raster == _oracle_raster(segment_map, catalog)).all()

    def test_triangle_matches_the_oracle(self, catalog):
        segment_map = SegmentMap(17, 13)
        segment_map.add_region(catalog, "Tree", [(0.5, 0.25), (16.5, 1.75), (6.25, 12.5)])
        raster = render_control_array(segment_map, catalog)
        assert (raster == _oracle_raster(segment_map, catalog)).all()

    def test_rendering_is_deterministic(self, catalog):
        segment_map = SegmentMap(16, 16)
        segment_map.add_region(catalog, "Sky", [(0, 0), (16, 0), (16, 8), (0, 8)])
        assert render_control_image(segment_map, catalog) == render_control_image(
            segment_map, catalog
        )

    def test_palette_recovery_is_lossless_for_visible_regions(self, catalog):
        segment_map = SegmentMap(16, 16)
        segment_map.add_region(catalog, "Sky", [(0, 0), (16, 0), (16, 8), (0, 8)])
        segment_map.add_region(catalog, "Grass", [(0, 8), (16, 8), (16, 16), (0, 16)])
        raster = render_control_array(segment_map, catalog)
        seen = {tuple(color) for color in raster.reshape(-1, 3)}
        seen.discard(catalog.background_color)
        assert {catalog.concept_for_color(c) for c in seen} == {"Sky", "Grass"}


class TestFallbackRender:
    def _square_map(self, catalog):
        segment_map = SegmentMap(32, 32)
        segment_map.add_region(catalog, "Flower", [(4, 4), (28, 4), (28, 28), (4, 28)])
        return segment_map

    def test_same_inputs_give_identical_bytes(self, catalog):
        segment_map = self._square_map(catalog)
        first = fallback_render(segment_map, catalog, "watercolor painting")
        second = fallback_render(segment_map, catalog, "watercolor painting")
        assert first == second

    def test_styles_differ(self, catalog):
        segment_map = self._square_map(catalog)
        assert fallback_render(segment_map, catalog, "sketch") != fallback_render(
            segment_map, catalog, "oil painting"
        )

    def test_empty_map_renders_background_only(self, catalog):
        image = png_to_array(fallback_render(SegmentMap(16, 16), catalog, "flat illustration"))
        assert (image == np.array(catalog.background_color)).all()

    @pytest.mark.parametrize("style", ["watercolor painting", "oil painting", "sketch", "flat illustration"])
    def test_output_has_canvas_dimensions(self, catalog, style):
        segment_map = self._square_map(catalog)
        image = png_to_array(fallback_render(segment_map, catalog, style))
        assert image.shape == (32, 32, 3)
