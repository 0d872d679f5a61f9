"""Golden fixtures for generation-prompt assembly.

Every expected string below was derived BY HAND by applying the documented
rules (keyword extraction -> description binding -> style phrases) to the
transcript, before running the implementation; the derivation for each
fixture is spelled out next to it. The suite pins these strings byte-exact.

Transcript events:
    ("draw", concept, note_concepts)  draw event + canvas note naming what
                                       was on the canvas before the stroke
    ("user", text)                     client speech
    ("agent", text)                    agent speech (must be ignored)
"""

from __future__ import annotations

from arthomework.canvas.segments import canvas_note_text, draw_event_text
from arthomework.core.types import Speaker, Utterance, UtteranceKind
from tests.conftest import ts


def build_transcript(events) -> list[Utterance]:
    transcript: list[Utterance] = []
    at = 0.0
    for event in events:
        at += 1.0
        if event[0] == "draw":
            _, concept, before = event
            transcript.append(
                Utterance(Speaker.CLIENT, UtteranceKind.DRAW_EVENT, draw_event_text(concept), ts(at))
            )
            at += 1.0
            transcript.append(
                Utterance(Speaker.SYSTEM, UtteranceKind.CANVAS_NOTE, canvas_note_text(before), ts(at))
            )
        elif event[0] == "user":
            transcript.append(Utterance(Speaker.CLIENT, UtteranceKind.SPEECH, event[1], ts(at)))
        elif event[0] == "agent":
            transcript.append(Utterance(Speaker.AGENT, UtteranceKind.SPEECH, event[1], ts(at)))
        else:
            raise ValueError(event[0])
    return transcript


# (name, events, selected style name or None, expected prompt)
GOLDEN_PROMPTS = [
    (
        # Five strokes; last note lists [sky, mountain, grass, ocean], the paired
        # draw event adds "clouds" -> keywords sky, mountain, grass, ocean, clouds.
        # Clause "Colorful clouds" binds clouds ("colorful"); "emerald green
        # mountains and grass" holds mountains(9 chars) and grass(5) -> longest
        # match wins: mountain, description "emerald green"; "choppy ocean" binds
        # ocean ("choppy"). sky and grass keep no description. No styles.
        "five_concept_landscape",
        [
            ("draw", "Ocean", []),
            ("agent", "What kind of ocean is this?"),
            ("draw", "Grass", ["Ocean"]),
            ("agent", "What kind of grass is this?"),
            ("draw", "Sky", ["Grass", "Ocean"]),
            ("agent", "What kind of sky is this?"),
            ("draw", "Mountain", ["Sky", "Grass", "Ocean"]),
            ("agent", "What kind of mountain is this?"),
            ("draw", "Clouds", ["Sky", "Mountain", "Grass", "Ocean"]),
            ("agent", "What kind of cloud is this?"),
            ("user", "Colorful clouds, emerald green mountains and grass, choppy ocean"),
        ],
        None,
        "sky, emerald green mountain, grass, choppy ocean, colorful clouds",
    ),
    (
        # Keywords [flower, grass]; clause "red rose flower" binds flower with
        # "red rose"; grass bare; selected style appends its suffix.
        "flower_grass_watercolor",
        [
            ("draw", "Flower", []),
            ("agent", "What kind of flower is this?"),
            ("draw", "Grass", ["Flower"]),
            ("agent", "What kind of grass is this?"),
            ("user", "red rose flower"),
        ],
        "watercolor painting",
        "red rose flower, grass, watercolor painting",
    ),
    (
        # Single stroke, no dialogue, no style -> the bare keyword.
        "bare_single_concept",
        [("draw", "Ocean", [])],
        None,
        "ocean",
    ),
    (
        # "It's a stormy ocean": leading it's/a are dropped -> "stormy ocean".
        "leading_stopwords_dropped",
        [
            ("draw", "Ocean", []),
            ("agent", "What kind of ocean is this?"),
            ("user", "It's a stormy ocean."),
        ],
        None,
        "stormy ocean",
    ),
    (
        # "The ocean is stormy tonight": only "the" precedes the keyword, which
        # is no description at all -> keyword stays bare (trailing words never
        # become descriptions).
        "description_must_precede_keyword",
        [
            ("draw", "Ocean", []),
            ("user", "The ocean is stormy tonight"),
        ],
        None,
        "ocean",
    ),
    (
        # Keywords [tree, lake]. Clause "a quiet lake beside the tree" matches
        # both (4 chars each); the tie goes to the leftmost match -> lake with
        # "quiet" ("a" dropped). tree stays bare and keeps keyword order.
        "leftmost_match_wins_ties",
        [
            ("draw", "Tree", []),
            ("draw", "Lake", ["Tree"]),
            ("user", "a quiet lake beside the tree"),
        ],
        None,
        "tree, quiet lake",
    ),
    (
        # Two clauses describe sky; the earlier clause wins, the later is unused.
        "earlier_clause_wins",
        [
            ("draw", "Sky", []),
            ("user", "Grey sky. Endless sky above the town"),
        ],
        None,
        "grey sky",
    ),
    (
        # Plural in dialogue binds the singular keyword: "fluffy clouds" -> cloud.
        "plural_binds_singular_keyword",
        [
            ("draw", "Cloud", []),
            ("user", "fluffy clouds everywhere"),
        ],
        None,
        "fluffy cloud",
    ),
    (
        # Style named in dialogue only: appended as its own phrase.
        "style_from_dialogue",
        [
            ("draw", "Mountain", []),
            ("user", "misty mountain, oil painting please"),
        ],
        None,
        "misty mountain, oil painting",
    ),
    (
        # Dialogue style and a different selected style both appear, dialogue first.
        "dialogue_style_then_selected",
        [
            ("draw", "Flower", []),
            ("user", "a bright flower in sketch style"),
        ],
        "watercolor painting",
        "bright flower, sketch, watercolor painting",
    ),
    (
        # Dialogue mentions the selected style; it appears once, not twice.
        "selected_style_deduplicated",
        [
            ("draw", "Tree", []),
            ("user", "I would like watercolor painting"),
        ],
        "watercolor painting",
        "tree, watercolor painting",
    ),
    (
        # Re-drawing a concept does not duplicate its keyword.
        "repeated_concept_not_duplicated",
        [
            ("draw", "Ocean", []),
            ("draw", "Ocean", ["Ocean"]),
            ("user", "wild ocean"),
        ],
        None,
        "wild ocean",
    ),
    (
        # Dialogue without any concept words leaves all keywords bare.
        "unrelated_dialogue_ignored",
        [
            ("draw", "Human", []),
            ("draw", "Soil", ["Human"]),
            ("user", "I feel tired today"),
        ],
        None,
        "human, soil",
    ),
]
