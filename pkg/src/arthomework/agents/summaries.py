"""Phase summarizers and the therapist-question generator.

Summaries are bounded and post-filtered: a reply that trips the diagnosis
lexicon is rejected rather than shown to the therapist. Question generation
always yields exactly two questions; a provider that can't manage that gets
one re-ask, then its output is truncated or padded from fixed fallbacks.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from datetime import datetime
from typing import Optional, Sequence

from arthomework.agents.providers import ChatProvider, ChatRequest, ExchangeLog, provider_call
from arthomework.agents.templates import load_template, load_template_lines
from arthomework.core.timeutil import from_iso, to_iso, utc_now
from arthomework.core.types import Utterance
from arthomework.errors import ArtHomeworkError, PreconditionError, ProviderError

DEFAULT_SUMMARY_WORD_LIMIT = 120

DEFAULT_DIAGNOSIS_LEXICON = [
    "diagnos", "disorder", "patholog", "clinical depression", "ptsd",
    "bipolar", "schizo", "prescrib",
]

SUMMARY_UNAVAILABLE = "(summary unavailable)"


class DiagnosisFilteredError(ArtHomeworkError):
    code = "summary_rejected"


@dataclass
class SummaryReport:
    session_id: str
    art_summary: str
    discussion_summary: str
    therapist_questions: list[str]
    generated_at: datetime = field(default_factory=utc_now)
    questions_unavailable: bool = False

    def __post_init__(self) -> None:
        if len(self.therapist_questions) != 2:
            raise ValueError("a summary report carries exactly two therapist questions")
        self.therapist_questions = [normalize_question(q) for q in self.therapist_questions]

    def to_dict(self) -> dict:
        return {
            "session_id": self.session_id,
            "art_summary": self.art_summary,
            "discussion_summary": self.discussion_summary,
            "therapist_questions": list(self.therapist_questions),
            "generated_at": to_iso(self.generated_at),
            "questions_unavailable": self.questions_unavailable,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SummaryReport":
        return cls(
            session_id=data["session_id"],
            art_summary=data["art_summary"],
            discussion_summary=data["discussion_summary"],
            therapist_questions=list(data["therapist_questions"]),
            generated_at=from_iso(data["generated_at"]),
            questions_unavailable=bool(data.get("questions_unavailable", False)),
        )


def normalize_question(text: str) -> str:
    text = re.sub(r"^\s*(?:[-*•]|\d+[.)])\s*", "", text.strip())
    text = text.rstrip()
    if not text.endswith("?"):
        text = text.rstrip(".!…") + "?"
    return text


def _transcript_payload(transcript: Sequence[Utterance]) -> str:
    return json.dumps(
        {"transcript": [u.to_dict() for u in transcript]},
        ensure_ascii=False,
        sort_keys=True,
    )


def truncate_words(text: str, limit: int) -> str:
    words = text.split()
    return text if len(words) <= limit else " ".join(words[:limit])


def summarize_phase(
    transcript: Sequence[Utterance],
    phase_kind: str,
    provider: ChatProvider,
    log: Optional[ExchangeLog] = None,
    word_limit: int = DEFAULT_SUMMARY_WORD_LIMIT,
    diagnosis_lexicon: Optional[Sequence[str]] = None,
    language: str = "en",
) -> str:
    if not transcript:
        raise PreconditionError("cannot summarize an empty transcript")
    system_prompt = load_template("summary_system", language).format(word_limit=word_limit)
    request = ChatRequest.build(
        system_prompt,
        [("user", f"Phase: {phase_kind}"), ("user", _transcript_payload(transcript))],
    )
    summary = truncate_words(provider_call(provider, request, log, retries=1).strip(), word_limit)
    lexicon = diagnosis_lexicon if diagnosis_lexicon is not None else DEFAULT_DIAGNOSIS_LEXICON
    lowered = summary.lower()
    for term in lexicon:
        if term in lowered:
            raise DiagnosisFilteredError(
                f"summary rejected: contains blocked term {term!r}", term=term
            )
    return summary


def _parse_questions(reply: str) -> list[str]:
    return [line for line in (l.strip() for l in reply.splitlines()) if line]


def generate_therapist_questions(
    transcript: Sequence[Utterance],
    provider: ChatProvider,
    log: Optional[ExchangeLog] = None,
    language: str = "en",
) -> tuple[list[str], bool]:
    """(exactly two normalized questions, questions_unavailable flag)."""

    if not transcript:
        raise PreconditionError("cannot generate questions from an empty transcript")
    system_prompt = load_template("questions_system", language)
    request = ChatRequest.build(system_prompt, [("user", _transcript_payload(transcript))])
    fallbacks = load_template_lines("fallback_questions", language)

    try:
        questions = _parse_questions(provider_call(provider, request, log, retries=1))
        if len(questions) != 2:
            questions = _parse_questions(provider_call(provider, request, log, retries=0))
    except ProviderError:
        return [normalize_question(q) for q in fallbacks[:2]], True

    questions = questions[:2]
    while len(questions) < 2:
        questions.append(fallbacks[len(questions) % len(fallbacks)])
    return [normalize_question(q) for q in questions], False
