"""Art-phase companion: one elaboration question per draw event."""

from __future__ import annotations

from typing import Optional, Sequence

from arthomework.agents.providers import (
    SUGGESTION_PREFIX,
    ChatProvider,
    ChatRequest,
    ExchangeLog,
    provider_call,
)
from arthomework.agents.templates import load_template
from arthomework.errors import ProviderError


def art_phase_turn(
    concept: str,
    provider: ChatProvider,
    log: Optional[ExchangeLog] = None,
    history: Sequence[tuple[str, str]] = (),
    language: str = "en",
) -> Optional[str]:
    """Question for the concept the client just drew, or None.

    Returns None when the provider stays down after the retry: art-making
    must never block on the agent, so the failure is only logged.
    """

    suggestion = load_template("art_question", language).format(concept=concept.lower())
    system_prompt = load_template("art_companion_system", language)
    messages = list(history) + [("user", SUGGESTION_PREFIX + suggestion)]
    try:
        reply = provider_call(
            provider, ChatRequest.build(system_prompt, messages), log, retries=1
        ).strip()
    except ProviderError:
        return None
    return reply or suggestion
