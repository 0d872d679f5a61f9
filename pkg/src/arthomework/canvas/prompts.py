"""Generation-prompt assembly from an art-phase transcript.

The reference implementation is rule-based and deterministic:

1. Keywords: the concepts the canvas holds at the end of the transcript,
   read from the last canvas-state note plus the draw event paired with it
   (the note describes the canvas before that stroke). Note order is kept;
   the freshly drawn concept goes last.
2. Descriptions: client dialogue is split into clauses (commas and sentence
   punctuation). A clause binds to at most one keyword; when several
   keywords occur in one clause the longest matched surface form wins
   (leftmost match on ties), and a keyword already bound keeps its earliest
   clause. The bound keyword is rewritten as "<words before the match>
   <keyword>", with leading articles/pronouns dropped from the description;
   a description that is nothing but those words does not bind.
3. Styles: registered style names mentioned in the client dialogue are
   appended as their own phrases (first-mention order), then the selected
   style's suffix if it is not already present.

The result joins all phrases with ", ". An LLM-backed variant exists for
deployments that prefer provider phrasing; the rule-based path is the
reference the golden suite pins.
"""

from __future__ import annotations

import re

from arthomework.canvas.segments import parse_canvas_note, parse_draw_event
from arthomework.canvas.styles import StyleRegistry, StyleTag
from arthomework.core.types import Speaker, Utterance, UtteranceKind
from arthomework.errors import EmptyCanvasError

_CLAUSE_SPLIT = re.compile(r"[,.;!?]+")
_EDGE_PUNCT = re.compile(r"^\W+|\W+$")

# dropped from the front of a description; a description of only these is no description
_LEADING_STOPWORDS = {
    "a", "an", "and", "are", "he", "her", "his", "i", "is", "it", "it's", "its",
    "my", "our", "she", "that", "the", "their", "there", "these", "they", "this",
    "those", "was", "we", "were", "you", "your",
}


def _clauses(transcript: list[Utterance]) -> list[str]:
    clauses: list[str] = []
    for utterance in transcript:
        if utterance.kind is not UtteranceKind.SPEECH or utterance.speaker is not Speaker.CLIENT:
            continue
        for part in _CLAUSE_SPLIT.split(utterance.text):
            part = part.strip()
            if part:
                clauses.append(part)
    return clauses


def _forms(word: str) -> set[str]:
    word = word.lower()
    forms = {word}
    if len(word) > 4 and word.endswith("es"):
        forms.add(word[:-2])
    if len(word) > 3 and word.endswith("s"):
        forms.add(word[:-1])
    return forms


def _tokens(clause: str) -> list[str]:
    return [t for t in (_EDGE_PUNCT.sub("", raw).lower() for raw in clause.split()) if t]


def _find_keyword(tokens: list[str], keyword: str) -> tuple[int, int] | None:
    """(start index, matched surface length) of the keyword in the tokens."""

    kw_tokens = keyword.split()
    for start in range(len(tokens) - len(kw_tokens) + 1):
        window = tokens[start : start + len(kw_tokens)]
        if all(_forms(a) & _forms(b) for a, b in zip(window, kw_tokens)):
            return start, sum(len(t) for t in window)
    return None


def canvas_keywords(transcript: list[Utterance]) -> list[str]:
    """Concepts on the canvas at the end of the transcript."""

    note_index = None
    for index in range(len(transcript) - 1, -1, -1):
        if transcript[index].kind is UtteranceKind.CANVAS_NOTE:
            note_index = index
            break
    if note_index is None:
        raise EmptyCanvasError("transcript has no canvas-state note; nothing was drawn")

    keywords = parse_canvas_note(transcript[note_index].text)
    if note_index > 0 and transcript[note_index - 1].kind is UtteranceKind.DRAW_EVENT:
        drawn = parse_draw_event(transcript[note_index - 1].text)
        if drawn and drawn not in keywords:
            keywords.append(drawn)
    if not keywords:
        raise EmptyCanvasError("canvas is empty")
    return keywords


def _description_before(tokens: list[str], start: int) -> str:
    leading = tokens[:start]
    while leading and leading[0] in _LEADING_STOPWORDS:
        leading = leading[1:]
    return " ".join(leading)


def _bind_descriptions(keywords: list[str], clauses: list[str]) -> dict[int, str]:
    descriptions: dict[int, str] = {}
    for clause in clauses:
        tokens = _tokens(clause)
        # best = (surface_len, -start, -kw_index, kw_index, description)
        best: tuple[int, int, int, int, str] | None = None
        for index, keyword in enumerate(keywords):
            if index in descriptions:
                continue
            found = _find_keyword(tokens, keyword)
            if found is None:
                continue
            start, surface_len = found
            description = _description_before(tokens, start)
            if not description:
                continue
            candidate = (surface_len, -start, -index, index, description)
            if best is None or candidate[:3] > best[:3]:
                best = candidate
        if best is not None:
            descriptions[best[3]] = best[4]
    return descriptions


def _style_phrases(
    clauses: list[str],
    selected: StyleTag | None,
    registry: StyleRegistry,
) -> list[str]:
    phrases: list[str] = []
    dialogue = " . ".join(clauses).lower()
    for name in registry.names():
        if re.search(rf"\b{re.escape(name.lower())}\b", dialogue):
            suffix = registry.get(name).prompt_suffix
            if suffix not in phrases:
                phrases.append(suffix)
    if selected is not None and selected.prompt_suffix not in phrases:
        phrases.append(selected.prompt_suffix)
    return phrases


def assemble_generation_prompt(
    transcript: list[Utterance],
    style: StyleTag | None = None,
    registry: StyleRegistry | None = None,
) -> str:
    registry = registry if registry is not None else StyleRegistry()
    keywords = canvas_keywords(transcript)
    clauses = _clauses(transcript)
    descriptions = _bind_descriptions(keywords, clauses)

    phrases = []
    for index, keyword in enumerate(keywords):
        description = descriptions.get(index)
        phrases.append(f"{description} {keyword}" if description else keyword)
    phrases.extend(_style_phrases(clauses, style, registry))
    return ", ".join(phrases)


def render_art_transcript(transcript: list[Utterance]) -> str:
    """Provider-facing rendering of an art-phase transcript.

    Draw events and their canvas notes collapse into one USER line tagged
    [user-drawn] / [canvas content]; client speech is tagged [user dialogue].
    """

    lines: list[str] = []
    index = 0
    while index < len(transcript):
        utterance = transcript[index]
        if utterance.kind is UtteranceKind.DRAW_EVENT:
            note = None
            if (
                index + 1 < len(transcript)
                and transcript[index + 1].kind is UtteranceKind.CANVAS_NOTE
            ):
                note = transcript[index + 1]
                index += 1
            line = f"USER: [user-drawn] {utterance.text}"
            if note is not None:
                line += f" [canvas content] {note.text}"
            lines.append(line)
        elif utterance.kind is UtteranceKind.CANVAS_NOTE:
            lines.append(f"USER: [canvas content] {utterance.text}")
        elif utterance.kind is UtteranceKind.SPEECH:
            if utterance.speaker is Speaker.AGENT:
                lines.append(f"ASSISTANT: {utterance.text}")
            else:
                lines.append(f"USER: [user dialogue] {utterance.text}")
        index += 1
    return "\n".join(lines)
