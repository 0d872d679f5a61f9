"""Property suite: the engine's utterance trace must equal the closed-form
reference sequence for random profiles and extension patterns.

Reference (independent of the engine's turn-by-turn mechanics): for a
profile with principles 1..N and an extension pattern E within {1..N},

    trace = P1, [E1], P2, [E2], ..., PN, [EN], C

with exactly one concluding remark, each extension present iff its step is
in E, and principal texts equal to the first sample questions in profile
order.
"""

from __future__ import annotations

import random
import re

from arthomework.agents.discussion import (
    CONCLUDING,
    EXTENSION,
    PRINCIPAL,
    DialogueEngine,
    DialogueState,
)
from arthomework.agents.principles import DialoguePrinciple
from arthomework.agents.providers import ExchangeLog, MockChatProvider

_STEP_LABEL = re.compile(r"step\s*'?\[", re.IGNORECASE)

FIRE = "please-extend"


def reference_trace(n_steps: int, pattern: set[int]) -> list[tuple[str, int | None]]:
    trace: list[tuple[str, int | None]] = []
    for step in range(1, n_steps + 1):
        trace.append((PRINCIPAL, step))
        if step in pattern:
            trace.append((EXTENSION, step))
    trace.append((CONCLUDING, None))
    return trace


def random_profile(rng: random.Random, n_steps: int) -> list[DialoguePrinciple]:
    return [
        DialoguePrinciple(
            principle_id=f"p{step}-{rng.randrange(10**6)}",
            statement=f"Statement {step} {rng.randrange(10**6)}",
            example_questions=[
                f"Sample question {step}.{k} ({rng.randrange(10**6)})?"
                for k in range(rng.randint(1, 3))
            ],
            position=step,
        )
        for step in range(1, n_steps + 1)
    ]


def drive(engine: DialogueEngine, expected) -> list:
    """Send one user message per remaining expected turn, firing the
    extension predicate exactly where the expected trace wants one."""

    turns = [engine.open(DialogueState(session_id="prop"))]
    for kind, _step in expected[1:]:
        message = FIRE if kind == EXTENSION else "a short reply"
        turns.append(engine.advance(turns[-1].state, message))
    return turns


def check_pair(rng: random.Random) -> None:
    n_steps = rng.randint(1, 10)
    pattern = {step for step in range(1, n_steps + 1) if rng.random() < 0.4}
    profile = random_profile(rng, n_steps)
    log = ExchangeLog()
    engine = DialogueEngine(
        therapist_name="T",
        principles=profile,
        provider=MockChatProvider(),
        log=log,
        extension_predicate=lambda text: text == FIRE,
    )

    expected = reference_trace(n_steps, pattern)
    turns = drive(engine, expected)

    assert [(t.kind, t.step) for t in turns] == expected

    # principal questions are the first sample questions, in profile order
    principal_texts = [t.text for t in turns if t.kind == PRINCIPAL]
    assert principal_texts == [p.example_questions[0] for p in profile]

    # exactly one concluding remark, at the very end
    assert sum(1 for t in turns if t.kind == CONCLUDING) == 1
    assert turns[-1].kind == CONCLUDING

    # no step labels anywhere in the emitted text
    assert not any(_STEP_LABEL.search(t.text) for t in turns)

    # current_step never decreases
    steps = [t.state.current_step for t in turns]
    assert all(a <= b for a, b in zip(steps, steps[1:]))

    # audit completeness: every turn backed by a successful exchange
    assert sum(1 for e in log.entries() if not e.failed) == len(turns)


def test_dialogue_protocol_random_pairs_small():
    rng = random.Random(0xA17)
    for _ in range(100):
        check_pair(rng)


def test_monotonicity_with_interleaved_freeform_chat():
    rng = random.Random(7)
    profile = random_profile(rng, 3)
    engine = DialogueEngine(
        therapist_name="T",
        principles=profile,
        provider=MockChatProvider(),
        extension_predicate=lambda text: text == FIRE,
    )
    turn = engine.open(DialogueState(session_id="s"))
    seen = [turn.state.current_step]
    for _ in range(10):
        turn = engine.advance(turn.state, "still talking")
        seen.append(turn.state.current_step)
    assert seen == sorted(seen)
    assert turn.state.concluded
