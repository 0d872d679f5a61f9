"""Per-session homework records compiled for the therapist."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from datetime import datetime
from typing import Optional

from arthomework.agents.providers import ChatProvider, ExchangeLog
from arthomework.agents.summaries import (
    SUMMARY_UNAVAILABLE,
    DiagnosisFilteredError,
    generate_therapist_questions,
    summarize_phase,
)
from arthomework.core.timeutil import from_iso, to_iso, utc_now
from arthomework.core.types import HomeworkSession, PhaseKind
from arthomework.errors import DanglingRefError, PreconditionError, ProviderError
from arthomework.storage import DocumentStore

RECORD_NAMESPACE = "records"
SEGMENT_NAMESPACE = "segments"


@dataclass
class HistoryRecord:
    session_id: str
    segments_ref: Optional[str]
    process_frames: list[str]
    artwork_ref: Optional[str]
    control_image_ref: Optional[str]
    dialogue: dict
    art_summary: str
    discussion_summary: str
    therapist_questions: list[str]
    questions_unavailable: bool = False
    compiled_at: datetime = field(default_factory=utc_now)
    input_fingerprint: str = ""

    def to_dict(self) -> dict:
        return {
            "session_id": self.session_id,
            "segments_ref": self.segments_ref,
            "process_frames": list(self.process_frames),
            "artwork_ref": self.artwork_ref,
            "control_image_ref": self.control_image_ref,
            "dialogue": self.dialogue,
            "art_summary": self.art_summary,
            "discussion_summary": self.discussion_summary,
            "therapist_questions": list(self.therapist_questions),
            "questions_unavailable": self.questions_unavailable,
            "compiled_at": to_iso(self.compiled_at),
            "input_fingerprint": self.input_fingerprint,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "HistoryRecord":
        return cls(
            session_id=data["session_id"],
            segments_ref=data.get("segments_ref"),
            process_frames=list(data.get("process_frames", [])),
            artwork_ref=data.get("artwork_ref"),
            control_image_ref=data.get("control_image_ref"),
            dialogue=data["dialogue"],
            art_summary=data["art_summary"],
            discussion_summary=data["discussion_summary"],
            therapist_questions=list(data["therapist_questions"]),
            questions_unavailable=bool(data.get("questions_unavailable", False)),
            compiled_at=from_iso(data["compiled_at"]),
            input_fingerprint=data.get("input_fingerprint", ""),
        )


def _session_fingerprint(session: HomeworkSession) -> str:
    canonical = json.dumps(session.to_dict(), sort_keys=True, ensure_ascii=False)
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def _check_refs(session: HomeworkSession, docs: DocumentStore) -> None:
    for artwork in session.artworks:
        if not docs.exists(SEGMENT_NAMESPACE, artwork.artwork_id):
            raise DanglingRefError(
                f"segment map missing: {artwork.segment_map_ref}", ref=artwork.segment_map_ref
            )
        refs = [artwork.control_image_ref, *artwork.process_frames]
        if artwork.generated_image_ref:
            refs.append(artwork.generated_image_ref)
        for ref in refs:
            if not docs.file_exists(ref):
                raise DanglingRefError(f"stored image missing: {ref}", ref=ref)


def compile_session_record(
    session: HomeworkSession,
    docs: DocumentStore,
    provider: ChatProvider,
    log: Optional[ExchangeLog] = None,
    word_limit: int = 120,
    language: str = "en",
    diagnosis_lexicon=None,
) -> HistoryRecord:
    """Assemble (or return the cached) record for a closed session.

    Idempotent for frozen inputs: the record stores a fingerprint of the
    session document and is only recompiled when that fingerprint moves.
    """

    if session.ended_at is None:
        raise PreconditionError(f"session {session.session_id} is still open")

    fingerprint = _session_fingerprint(session)
    if docs.exists(RECORD_NAMESPACE, session.session_id):
        stored = HistoryRecord.from_dict(docs.load(RECORD_NAMESPACE, session.session_id))
        if stored.input_fingerprint == fingerprint:
            return stored

    _check_refs(session, docs)
    final_artwork = session.artworks[-1] if session.artworks else None

    def safe_summary(transcript, kind: PhaseKind) -> str:
        if not transcript:
            return ""
        try:
            return summarize_phase(
                transcript,
                kind.value,
                provider,
                log,
                word_limit=word_limit,
                diagnosis_lexicon=diagnosis_lexicon,
                language=language,
            )
        except (ProviderError, DiagnosisFilteredError):
            return SUMMARY_UNAVAILABLE

    art_summary = safe_summary(session.art_phase.transcript, PhaseKind.ART_MAKING)
    discussion_transcript = (
        session.discussion_phase.transcript if session.discussion_phase else []
    )
    discussion_summary = safe_summary(discussion_transcript, PhaseKind.DISCUSSION)

    full_transcript = list(session.art_phase.transcript) + list(discussion_transcript)
    questions, unavailable = generate_therapist_questions(
        full_transcript, provider, log, language=language
    )

    record = HistoryRecord(
        session_id=session.session_id,
        segments_ref=final_artwork.segment_map_ref if final_artwork else None,
        process_frames=list(final_artwork.process_frames) if final_artwork else [],
        artwork_ref=final_artwork.generated_image_ref if final_artwork else None,
        control_image_ref=final_artwork.control_image_ref if final_artwork else None,
        dialogue={
            "art": [u.to_dict() for u in session.art_phase.transcript],
            "discussion": [u.to_dict() for u in discussion_transcript],
        },
        art_summary=art_summary,
        discussion_summary=discussion_summary,
        therapist_questions=questions,
        questions_unavailable=unavailable,
        input_fingerprint=fingerprint,
    )
    docs.save(RECORD_NAMESPACE, session.session_id, record.to_dict())
    return record
