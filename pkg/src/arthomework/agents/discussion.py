"""Discussion-phase conversational agent.

Sequencing lives in this controller, not in the provider prompt: the
controller decides whether the next agent turn is the principal question of
the current principle, the single optional extension for it, or the
concluding remark after the last principle, and asks the provider only to
phrase the turn. A provider that is down (or that leaks step labels into
its reply) degrades to the principle's first sample question verbatim, so
the protocol holds under every provider behavior.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, replace
from typing import Callable, Optional, Sequence

from arthomework.agents.principles import DialoguePrinciple, check_positions
from arthomework.agents.providers import (
    SUGGESTION_PREFIX,
    ChatProvider,
    ChatRequest,
    ExchangeLog,
    provider_call,
)
from arthomework.agents.templates import load_template
from arthomework.errors import PreconditionError, ProviderError

PRINCIPAL = "principal"
EXTENSION = "extension"
CONCLUDING = "concluding"
FREEFORM = "freeform"

_STEP_LABEL = re.compile(r"step\s*'?\[?[A-Za-z0-9]\]?'?", re.IGNORECASE)

DEFAULT_EMOTION_LEXICON = [
    "afraid", "angry", "anxious", "ashamed", "calm", "excited", "fear", "feel",
    "feeling", "frustrated", "grateful", "grief", "happy", "hope", "hurt",
    "joy", "lonely", "love", "overwhelmed", "proud", "sad", "scared", "stress",
    "tired", "upset", "worried",
]


def default_extension_predicate(
    message: str,
    min_words: int = 15,
    lexicon: Optional[Sequence[str]] = None,
) -> bool:
    """Stand-in for the provider's own judgment about digging deeper."""

    words = message.split()
    if len(words) <= min_words:
        return False
    lexicon = lexicon if lexicon is not None else DEFAULT_EMOTION_LEXICON
    tokens = {re.sub(r"^\W+|\W+$", "", w.lower()) for w in words}
    return any(entry in tokens for entry in lexicon)


@dataclass
class DialogueState:
    session_id: str
    current_step: int = 0  # 0 before the first question, then 1..N
    concluded: bool = False
    extension_used_this_step: bool = False
    turns: int = 0

    def to_dict(self) -> dict:
        return {
            "session_id": self.session_id,
            "current_step": self.current_step,
            "concluded": self.concluded,
            "extension_used_this_step": self.extension_used_this_step,
            "turns": self.turns,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "DialogueState":
        return cls(
            session_id=data["session_id"],
            current_step=int(data["current_step"]),
            concluded=bool(data["concluded"]),
            extension_used_this_step=bool(data["extension_used_this_step"]),
            turns=int(data["turns"]),
        )


@dataclass(frozen=True)
class AgentTurn:
    text: str
    kind: str  # principal | extension | concluding | freeform
    step: Optional[int]
    state: DialogueState
    degraded: bool = False


def render_principles_block(principles: Sequence[DialoguePrinciple]) -> str:
    blocks = []
    for principle in sorted(principles, key=lambda p: p.position):
        lines = [f"Principle {principle.position}: {principle.statement}"]
        lines.extend(f"Sample question: {q}" for q in principle.example_questions)
        blocks.append("\n".join(lines))
    return "\n\n".join(blocks)


def build_discussion_system_prompt(
    therapist_name: str,
    principles: Sequence[DialoguePrinciple],
    language: str = "en",
) -> str:
    if not principles:
        raise PreconditionError("a discussion profile needs at least one principle")
    check_positions(list(principles))
    template = load_template("discussion_system", language)
    return template.format(
        therapist_name=therapist_name,
        principles_block=render_principles_block(principles),
    )


class DialogueEngine:
    def __init__(
        self,
        therapist_name: str,
        principles: Sequence[DialoguePrinciple],
        provider: ChatProvider,
        log: Optional[ExchangeLog] = None,
        language: str = "en",
        extension_predicate: Optional[Callable[[str], bool]] = None,
    ) -> None:
        if not principles:
            raise PreconditionError("a discussion profile needs at least one principle")
        check_positions(list(principles))
        self._principles = sorted(principles, key=lambda p: p.position)
        self._provider = provider
        self._log = log
        self._language = language
        self._predicate = extension_predicate or default_extension_predicate
        self._system_prompt = build_discussion_system_prompt(
            therapist_name, self._principles, language
        )

    @property
    def system_prompt(self) -> str:
        return self._system_prompt

    @property
    def step_count(self) -> int:
        return len(self._principles)

    def open(self, state: DialogueState, history: Sequence[tuple[str, str]] = ()) -> AgentTurn:
        """Emit the first principal question; the agent speaks first."""

        if state.current_step != 0 or state.concluded:
            raise PreconditionError("discussion already opened")
        new_state = replace(
            state, current_step=1, extension_used_this_step=False, turns=state.turns + 1
        )
        return self._emit(new_state, PRINCIPAL, 1, history)

    def advance(
        self,
        state: DialogueState,
        user_message: str,
        history: Sequence[tuple[str, str]] = (),
    ) -> AgentTurn:
        if state.current_step == 0:
            raise PreconditionError("discussion not opened yet")
        new_state = replace(state, turns=state.turns + 1)

        if state.concluded:
            return self._emit(new_state, FREEFORM, None, history, user_message)

        if not state.extension_used_this_step and self._predicate(user_message):
            new_state = replace(new_state, extension_used_this_step=True)
            return self._emit(new_state, EXTENSION, new_state.current_step, history, user_message)

        if state.current_step < len(self._principles):
            new_state = replace(
                new_state,
                current_step=state.current_step + 1,
                extension_used_this_step=False,
            )
            return self._emit(
                new_state, PRINCIPAL, new_state.current_step, history, user_message
            )

        new_state = replace(new_state, concluded=True)
        return self._emit(new_state, CONCLUDING, None, history, user_message)

    def _suggestion(self, kind: str, step: Optional[int]) -> str:
        if kind == PRINCIPAL:
            return self._principles[step - 1].example_questions[0]
        if kind == EXTENSION:
            return load_template("extension_question", self._language)
        if kind == CONCLUDING:
            return load_template("concluding_remark", self._language)
        return load_template("freeform_reply", self._language)

    def _emit(
        self,
        state: DialogueState,
        kind: str,
        step: Optional[int],
        history: Sequence[tuple[str, str]],
        user_message: Optional[str] = None,
    ) -> AgentTurn:
        suggestion = self._suggestion(kind, step)
        messages = list(history)
        if user_message is not None:
            messages.append(("user", user_message))
        messages.append(("user", SUGGESTION_PREFIX + suggestion))
        request = ChatRequest.build(self._system_prompt, messages)
        try:
            reply = provider_call(self._provider, request, self._log, retries=1).strip()
        except ProviderError:
            return AgentTurn(text=suggestion, kind=kind, step=step, state=state, degraded=True)
        if not reply or _STEP_LABEL.search(reply):
            # Label-leaking or empty reply: fall back to the suggestion verbatim.
            reply = suggestion
        return AgentTurn(text=reply, kind=kind, step=step, state=state)
