"""Externalized agent text templates, keyed by language code.

The deployment language is a config value; a language directory only needs
to override the files it translates, falling back to English.
"""

from __future__ import annotations

from functools import lru_cache
from importlib import resources

DEFAULT_LANGUAGE = "en"


@lru_cache(maxsize=None)
def load_template(name: str, language: str = DEFAULT_LANGUAGE) -> str:
    root = resources.files("arthomework.agents").joinpath("resources")
    for lang in (language, DEFAULT_LANGUAGE):
        candidate = root.joinpath(f"{lang}/{name}.txt")
        if candidate.is_file():
            return candidate.read_text(encoding="utf-8").rstrip("\n")
    raise FileNotFoundError(f"no template {name!r} for language {language!r}")


def load_template_lines(name: str, language: str = DEFAULT_LANGUAGE) -> list[str]:
    return [line for line in load_template(name, language).splitlines() if line.strip()]
