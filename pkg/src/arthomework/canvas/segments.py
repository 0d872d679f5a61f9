"""Segment maps: ordered, z-stacked color-coded regions drawn with semantic brushes.

Also owns the transcript text conventions for drawing activity. Each stroke
produces a draw-event line ("I drew the ocean.") followed by a canvas-state
note describing what was on the canvas *before* that stroke ("There is
nothing on the canvas right now."); the note lists concepts newest-first.
The prompt assembler parses these notes back, so the builder and parser
live side by side here.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from datetime import datetime

from arthomework.canvas.catalog import BrushCatalog
from arthomework.canvas.geometry import Polygon, validate_polygon
from arthomework.core.types import Speaker, Utterance, UtteranceKind

EMPTY_CANVAS_NOTE = "There is nothing on the canvas right now."

_DRAW_EVENT_RE = re.compile(r"^I drew (?:the |an? )?(.+?)\.?$", re.IGNORECASE)
_NOTE_RE = re.compile(r"^Now there is (.+) on the canvas\.$", re.IGNORECASE)


@dataclass
class Region:
    concept: str
    polygon: Polygon
    z_order: int

    def to_dict(self) -> dict:
        return {
            "concept": self.concept,
            "polygon": [[x, y] for x, y in self.polygon],
            "z_order": self.z_order,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Region":
        return cls(
            concept=data["concept"],
            polygon=[(float(x), float(y)) for x, y in data["polygon"]],
            z_order=int(data["z_order"]),
        )


@dataclass
class SegmentMap:
    width: int
    height: int
    regions: list[Region] = field(default_factory=list)

    def add_region(self, catalog: BrushCatalog, concept: str, polygon: Polygon) -> Region:
        canonical = catalog.canonical(concept)
        points = validate_polygon(polygon, self.width, self.height)
        next_z = max((r.z_order for r in self.regions), default=-1) + 1
        region = Region(concept=canonical, polygon=points, z_order=next_z)
        self.regions.append(region)
        return region

    def concepts_newest_first(self) -> list[str]:
        """Distinct concepts ordered by most recent stroke first."""

        seen: list[str] = []
        for region in sorted(self.regions, key=lambda r: r.z_order, reverse=True):
            if region.concept not in seen:
                seen.append(region.concept)
        return seen

    def to_dict(self) -> dict:
        return {
            "width": self.width,
            "height": self.height,
            "regions": [r.to_dict() for r in self.regions],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SegmentMap":
        return cls(
            width=int(data["width"]),
            height=int(data["height"]),
            regions=[Region.from_dict(r) for r in data.get("regions", [])],
        )


def _article(word: str) -> str:
    return "an" if word[:1].lower() in "aeiou" else "a"


def draw_event_text(concept: str) -> str:
    return f"I drew the {concept.lower()}."


def canvas_note_text(concepts: list[str]) -> str:
    """Render the canvas-state note for the given (pre-stroke) concept list."""

    names = [c.lower() for c in concepts]
    if not names:
        return EMPTY_CANVAS_NOTE
    if len(names) == 1:
        return f"Now there is {_article(names[0])} {names[0]} on the canvas."
    if len(names) == 2:
        return f"Now there is {names[0]} and {names[1]} on the canvas."
    return f"Now there is {', '.join(names[:-1])}, and {names[-1]} on the canvas."


def parse_canvas_note(text: str) -> list[str]:
    """Inverse of canvas_note_text; tolerant of articles and Oxford commas."""

    if text.strip() == EMPTY_CANVAS_NOTE:
        return []
    match = _NOTE_RE.match(text.strip())
    if not match:
        return []
    body = match.group(1)
    parts: list[str] = []
    for chunk in body.split(","):
        for piece in chunk.split(" and "):
            name = piece.strip()
            name = re.sub(r"^(?:an?|the)\s+", "", name, flags=re.IGNORECASE)
            if name:
                parts.append(name.lower())
    return parts


def parse_draw_event(text: str) -> str | None:
    match = _DRAW_EVENT_RE.match(text.strip())
    return match.group(1).lower() if match else None


def stroke_utterances(
    segment_map: SegmentMap,
    catalog: BrushCatalog,
    concept: str,
    polygon: Polygon,
    at: datetime,
    note_at: datetime,
) -> tuple[Region, Utterance, Utterance]:
    """Apply one stroke and return the (region, draw event, canvas note) triple.

    The note describes the canvas content before this stroke, mirroring how
    drawing activity is narrated to the prompt assembler.
    """

    before = segment_map.concepts_newest_first()
    region = segment_map.add_region(catalog, concept, polygon)
    draw = Utterance(
        speaker=Speaker.CLIENT,
        kind=UtteranceKind.DRAW_EVENT,
        text=draw_event_text(region.concept),
        at=at,
    )
    note = Utterance(
        speaker=Speaker.SYSTEM,
        kind=UtteranceKind.CANVAS_NOTE,
        text=canvas_note_text(before),
        at=note_at,
    )
    return region, draw, note
