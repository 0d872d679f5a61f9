"""Semantic brush catalog: concept names bound to palette colors.

The shipped mapping is a versioned JSON artifact (``resources/brush_palette_v1.json``)
keeping colors compatible with segmentation-conditioned image providers; deployments
can extend or replace it via config.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources

from arthomework.errors import UnknownConceptError

RGB = tuple[int, int, int]


def _as_rgb(value) -> RGB:
    r, g, b = (int(c) for c in value)
    for c in (r, g, b):
        if not 0 <= c <= 255:
            raise ValueError(f"color channel out of range: {value}")
    return (r, g, b)


@dataclass
class BrushCatalog:
    entries: list[tuple[str, RGB]]
    background_color: RGB = (0, 0, 0)
    palette_version: int = 1
    _by_key: dict[str, tuple[str, RGB]] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        self.background_color = _as_rgb(self.background_color)
        self.entries = [(concept, _as_rgb(color)) for concept, color in self.entries]
        self._by_key = {}
        colors_seen: dict[RGB, str] = {}
        for concept, color in self.entries:
            key = concept.strip().lower()
            if not key:
                raise ValueError("empty concept name")
            if key in self._by_key:
                raise ValueError(f"duplicate concept: {concept}")
            if color == self.background_color:
                raise ValueError(f"{concept}: palette color equals the background color")
            if color in colors_seen:
                raise ValueError(f"{concept}: palette color already used by {colors_seen[color]}")
            colors_seen[color] = concept
            self._by_key[key] = (concept, color)

    def has(self, concept: str) -> bool:
        return concept.strip().lower() in self._by_key

    def canonical(self, concept: str) -> str:
        """Catalog spelling of a concept; raises for unknown concepts."""

        try:
            return self._by_key[concept.strip().lower()][0]
        except KeyError:
            raise UnknownConceptError(
                f"no brush for concept {concept!r}", concept=concept
            ) from None

    def color_for(self, concept: str) -> RGB:
        self.canonical(concept)
        return self._by_key[concept.strip().lower()][1]

    def concept_for_color(self, color: RGB) -> str:
        for concept, entry_color in self.entries:
            if entry_color == tuple(color):
                return concept
        raise UnknownConceptError(f"no brush uses color {tuple(color)}", color=list(color))

    def concepts(self) -> list[str]:
        return [concept for concept, _ in self.entries]

    def to_dict(self) -> dict:
        return {
            "palette_version": self.palette_version,
            "background_color": list(self.background_color),
            "entries": [
                {"concept": concept, "color": list(color)} for concept, color in self.entries
            ],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "BrushCatalog":
        return cls(
            entries=[(e["concept"], _as_rgb(e["color"])) for e in data["entries"]],
            background_color=_as_rgb(data.get("background_color", (0, 0, 0))),
            palette_version=int(data.get("palette_version", 1)),
        )


def default_catalog() -> BrushCatalog:
    raw = resources.files("arthomework.canvas").joinpath("resources/brush_palette_v1.json")
    return BrushCatalog.from_dict(json.loads(raw.read_text(encoding="utf-8")))
