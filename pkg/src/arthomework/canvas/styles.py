"""Style registry for generated artwork."""

from __future__ import annotations

from dataclasses import dataclass

from arthomework.errors import NotFoundError


@dataclass(frozen=True)
class StyleTag:
    name: str
    prompt_suffix: str


DEFAULT_STYLES = [
    StyleTag("watercolor painting", "watercolor painting"),
    StyleTag("oil painting", "oil painting"),
    StyleTag("sketch", "sketch"),
    StyleTag("flat illustration", "flat illustration"),
]


class StyleRegistry:
    def __init__(self, styles: list[StyleTag] | None = None) -> None:
        self._styles: dict[str, StyleTag] = {}
        for style in styles if styles is not None else DEFAULT_STYLES:
            self.register(style)

    def register(self, style: StyleTag) -> None:
        key = style.name.strip().lower()
        if key in self._styles:
            raise ValueError(f"style already registered: {style.name}")
        self._styles[key] = style

    def get(self, name: str) -> StyleTag:
        try:
            return self._styles[name.strip().lower()]
        except KeyError:
            raise NotFoundError(f"unknown style {name!r}", style=name) from None

    def has(self, name: str) -> bool:
        return name.strip().lower() in self._styles

    def names(self) -> list[str]:
        return [style.name for style in self._styles.values()]
