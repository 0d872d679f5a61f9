from arthomework.agents.art_agent import art_phase_turn
from arthomework.agents.discussion import (
    CONCLUDING,
    EXTENSION,
    FREEFORM,
    PRINCIPAL,
    AgentTurn,
    DialogueEngine,
    DialogueState,
    build_discussion_system_prompt,
    default_extension_predicate,
)
from arthomework.agents.principles import DialoguePrinciple, check_positions, default_principles
from arthomework.agents.providers import (
    SUGGESTION_PREFIX,
    ChatProvider,
    ChatRequest,
    EchoChatProvider,
    ExchangeLog,
    HttpChatProvider,
    HttpSpeechToText,
    HttpTextToSpeech,
    MockChatProvider,
    MockSpeechToText,
    MockTextToSpeech,
    ProviderExchange,
    provider_call,
)
from arthomework.agents.summaries import (
    SUMMARY_UNAVAILABLE,
    DiagnosisFilteredError,
    SummaryReport,
    generate_therapist_questions,
    normalize_question,
    summarize_phase,
)
from arthomework.agents.templates import load_template, load_template_lines

__all__ = [
    "CONCLUDING",
    "EXTENSION",
    "FREEFORM",
    "PRINCIPAL",
    "SUGGESTION_PREFIX",
    "SUMMARY_UNAVAILABLE",
    "AgentTurn",
    "ChatProvider",
    "ChatRequest",
    "DiagnosisFilteredError",
    "DialogueEngine",
    "DialoguePrinciple",
    "DialogueState",
    "EchoChatProvider",
    "ExchangeLog",
    "HttpChatProvider",
    "HttpSpeechToText",
    "HttpTextToSpeech",
    "MockChatProvider",
    "MockSpeechToText",
    "MockTextToSpeech",
    "ProviderExchange",
    "SummaryReport",
    "art_phase_turn",
    "build_discussion_system_prompt",
    "check_positions",
    "default_extension_predicate",
    "default_principles",
    "generate_therapist_questions",
    "load_template",
    "load_template_lines",
    "normalize_question",
    "provider_call",
    "summarize_phase",
]
