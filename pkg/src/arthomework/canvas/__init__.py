from arthomework.canvas.catalog import RGB, BrushCatalog, default_catalog
from arthomework.canvas.control import (
    png_bytes,
    png_to_array,
    render_control_array,
    render_control_image,
)
from arthomework.canvas.fallback import fallback_render, stylize_array
from arthomework.canvas.geometry import Polygon, inside_mask, validate_polygon
from arthomework.canvas.jobs import (
    TERMINAL_STATUSES,
    GenerationJob,
    JobQueue,
    JobStatus,
    can_transition,
)
from arthomework.canvas.prompts import (
    assemble_generation_prompt,
    canvas_keywords,
    render_art_transcript,
)
from arthomework.canvas.providers import (
    HttpImageProvider,
    ImageProvider,
    ImageRequest,
    MockImageProvider,
)
from arthomework.canvas.segments import (
    Region,
    SegmentMap,
    canvas_note_text,
    draw_event_text,
    parse_canvas_note,
    parse_draw_event,
    stroke_utterances,
)
from arthomework.canvas.styles import DEFAULT_STYLES, StyleRegistry, StyleTag

__all__ = [
    "DEFAULT_STYLES",
    "TERMINAL_STATUSES",
    "BrushCatalog",
    "GenerationJob",
    "HttpImageProvider",
    "ImageProvider",
    "ImageRequest",
    "JobQueue",
    "JobStatus",
    "MockImageProvider",
    "Polygon",
    "RGB",
    "Region",
    "SegmentMap",
    "StyleRegistry",
    "StyleTag",
    "assemble_generation_prompt",
    "canvas_keywords",
    "canvas_note_text",
    "can_transition",
    "default_catalog",
    "draw_event_text",
    "fallback_render",
    "inside_mask",
    "parse_canvas_note",
    "parse_draw_event",
    "png_bytes",
    "png_to_array",
    "render_art_transcript",
    "render_control_array",
    "render_control_image",
    "stroke_utterances",
    "stylize_array",
    "validate_polygon",
]
