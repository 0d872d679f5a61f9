"""Domain types shared by every other module.

Values are plain dataclasses with explicit ``to_dict``/``from_dict`` pairs;
the persistence layer stores exactly these dicts as JSON documents. Once
persisted a value is treated as immutable: mutation happens by replacing the
stored document under the owning session's writer lock, never in place.
"""

from __future__ import annotations

import uuid
from dataclasses import dataclass, field
from datetime import datetime
from enum import Enum
from typing import Optional

from arthomework.core.timeutil import from_iso, minutes_between, to_iso
from arthomework.errors import TimestampError


def new_id(prefix: str) -> str:
    """Opaque identifier; UUID4 with a short type prefix for debuggability."""

    return f"{prefix}-{uuid.uuid4().hex}"


class Speaker(str, Enum):
    CLIENT = "client"
    AGENT = "agent"
    SYSTEM = "system"


class UtteranceKind(str, Enum):
    SPEECH = "speech"
    DRAW_EVENT = "draw_event"
    CANVAS_NOTE = "canvas_note"
    TASK_DISPLAY = "task_display"
    OPENING_MESSAGE = "opening_message"


class PhaseKind(str, Enum):
    ART_MAKING = "art_making"
    DISCUSSION = "discussion"


@dataclass(frozen=True)
class Utterance:
    speaker: Speaker
    kind: UtteranceKind
    text: str
    at: datetime

    def to_dict(self) -> dict:
        return {
            "speaker": self.speaker.value,
            "kind": self.kind.value,
            "text": self.text,
            "at": to_iso(self.at),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Utterance":
        return cls(
            speaker=Speaker(data["speaker"]),
            kind=UtteranceKind(data["kind"]),
            text=data["text"],
            at=from_iso(data["at"]),
        )


@dataclass
class PhaseRecord:
    phase_kind: PhaseKind
    transcript: list[Utterance] = field(default_factory=list)
    started_at: Optional[datetime] = None
    ended_at: Optional[datetime] = None

    def to_dict(self) -> dict:
        return {
            "phase_kind": self.phase_kind.value,
            "transcript": [u.to_dict() for u in self.transcript],
            "started_at": to_iso(self.started_at) if self.started_at else None,
            "ended_at": to_iso(self.ended_at) if self.ended_at else None,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "PhaseRecord":
        return cls(
            phase_kind=PhaseKind(data["phase_kind"]),
            transcript=[Utterance.from_dict(u) for u in data["transcript"]],
            started_at=from_iso(data["started_at"]) if data.get("started_at") else None,
            ended_at=from_iso(data["ended_at"]) if data.get("ended_at") else None,
        )


@dataclass
class ArtworkRecord:
    artwork_id: str
    segment_map_ref: str
    control_image_ref: str
    style: str
    prompt_used: str
    generated_at: datetime
    generated_image_ref: Optional[str] = None
    process_frames: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "artwork_id": self.artwork_id,
            "segment_map_ref": self.segment_map_ref,
            "control_image_ref": self.control_image_ref,
            "generated_image_ref": self.generated_image_ref,
            "process_frames": list(self.process_frames),
            "style": self.style,
            "prompt_used": self.prompt_used,
            "generated_at": to_iso(self.generated_at),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ArtworkRecord":
        return cls(
            artwork_id=data["artwork_id"],
            segment_map_ref=data["segment_map_ref"],
            control_image_ref=data["control_image_ref"],
            generated_image_ref=data.get("generated_image_ref"),
            process_frames=list(data.get("process_frames", [])),
            style=data["style"],
            prompt_used=data["prompt_used"],
            generated_at=from_iso(data["generated_at"]),
        )


@dataclass
class HomeworkSession:
    session_id: str
    client_id: str
    profile_version: int
    art_phase: PhaseRecord
    discussion_phase: Optional[PhaseRecord] = None
    artworks: list[ArtworkRecord] = field(default_factory=list)
    started_at: Optional[datetime] = None
    ended_at: Optional[datetime] = None

    def to_dict(self) -> dict:
        return {
            "session_id": self.session_id,
            "client_id": self.client_id,
            "profile_version": self.profile_version,
            "art_phase": self.art_phase.to_dict(),
            "discussion_phase": self.discussion_phase.to_dict() if self.discussion_phase else None,
            "artworks": [a.to_dict() for a in self.artworks],
            "started_at": to_iso(self.started_at) if self.started_at else None,
            "ended_at": to_iso(self.ended_at) if self.ended_at else None,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "HomeworkSession":
        return cls(
            session_id=data["session_id"],
            client_id=data["client_id"],
            profile_version=data["profile_version"],
            art_phase=PhaseRecord.from_dict(data["art_phase"]),
            discussion_phase=(
                PhaseRecord.from_dict(data["discussion_phase"])
                if data.get("discussion_phase")
                else None
            ),
            artworks=[ArtworkRecord.from_dict(a) for a in data.get("artworks", [])],
            started_at=from_iso(data["started_at"]) if data.get("started_at") else None,
            ended_at=from_iso(data["ended_at"]) if data.get("ended_at") else None,
        )


@dataclass
class ClientProfile:
    client_id: str
    display_name: str
    therapist_id: str
    goals: list[str] = field(default_factory=list)
    created_at: Optional[datetime] = None

    def to_dict(self) -> dict:
        return {
            "client_id": self.client_id,
            "display_name": self.display_name,
            "therapist_id": self.therapist_id,
            "goals": list(self.goals),
            "created_at": to_iso(self.created_at) if self.created_at else None,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ClientProfile":
        return cls(
            client_id=data["client_id"],
            display_name=data["display_name"],
            therapist_id=data["therapist_id"],
            goals=list(data.get("goals", [])),
            created_at=from_iso(data["created_at"]) if data.get("created_at") else None,
        )


@dataclass
class TherapistProfile:
    therapist_id: str
    display_name: str
    client_ids: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "therapist_id": self.therapist_id,
            "display_name": self.display_name,
            "client_ids": list(self.client_ids),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "TherapistProfile":
        return cls(
            therapist_id=data["therapist_id"],
            display_name=data["display_name"],
            client_ids=list(data.get("client_ids", [])),
        )


def _check_transcript(violations: list[str], phase: PhaseRecord, label: str) -> None:
    previous: Optional[datetime] = None
    for index, utterance in enumerate(phase.transcript):
        if previous is not None and utterance.at <= previous:
            violations.append(
                f"{label}.transcript[{index}].at: not strictly after the previous utterance"
            )
        previous = utterance.at
        if utterance.kind in (UtteranceKind.DRAW_EVENT, UtteranceKind.CANVAS_NOTE):
            if phase.phase_kind is not PhaseKind.ART_MAKING:
                violations.append(
                    f"{label}.transcript[{index}].kind: {utterance.kind.value} outside art phase"
                )
            if utterance.speaker not in (Speaker.SYSTEM, Speaker.CLIENT):
                violations.append(
                    f"{label}.transcript[{index}].speaker: {utterance.kind.value} "
                    "must come from the client or the system"
                )


def _check_phase_bounds(violations: list[str], phase: PhaseRecord, label: str) -> None:
    if phase.started_at and phase.ended_at and phase.ended_at < phase.started_at:
        violations.append(f"{label}.ended_at: earlier than {label}.started_at")


def validate_session(session: HomeworkSession) -> list[str]:
    """Return every invariant violation as a human-readable string.

    An empty list means the session is well-formed. Pure: never mutates and
    never raises for invalid data.
    """

    violations: list[str] = []

    if session.started_at and session.ended_at and session.ended_at < session.started_at:
        violations.append("session.ended_at: earlier than session.started_at")
    if session.profile_version < 1:
        violations.append("session.profile_version: must be >= 1")

    if session.art_phase.phase_kind is not PhaseKind.ART_MAKING:
        violations.append("session.art_phase.phase_kind: must be art_making")
    _check_phase_bounds(violations, session.art_phase, "session.art_phase")
    _check_transcript(violations, session.art_phase, "session.art_phase")

    if session.discussion_phase is not None:
        if session.discussion_phase.phase_kind is not PhaseKind.DISCUSSION:
            violations.append("session.discussion_phase.phase_kind: must be discussion")
        _check_phase_bounds(violations, session.discussion_phase, "session.discussion_phase")
        _check_transcript(violations, session.discussion_phase, "session.discussion_phase")

    phases = [("session.art_phase", session.art_phase)]
    if session.discussion_phase is not None:
        phases.append(("session.discussion_phase", session.discussion_phase))
    openings = [
        (label, index)
        for label, phase in phases
        for index, u in enumerate(phase.transcript)
        if u.kind is UtteranceKind.OPENING_MESSAGE
    ]
    if len(openings) > 1:
        violations.append("session: more than one opening message utterance")
    elif openings and openings[0] != ("session.art_phase", 0):
        violations.append("session: opening message must be the first utterance")

    seen_artwork_ids = set()
    for index, artwork in enumerate(session.artworks):
        if artwork.artwork_id in seen_artwork_ids:
            violations.append(f"session.artworks[{index}].artwork_id: duplicate id")
        seen_artwork_ids.add(artwork.artwork_id)

    return violations


def _phase_minutes(phase: Optional[PhaseRecord], label: str) -> float:
    if phase is None:
        return 0.0
    if phase.started_at is None or phase.ended_at is None:
        raise TimestampError(f"{label}: phase timestamps missing", field=label)
    minutes = minutes_between(phase.started_at, phase.ended_at)
    if minutes < 0:
        raise TimestampError(f"{label}: ended before it started", field=label)
    return minutes


def session_durations(session: HomeworkSession) -> tuple[float, float]:
    """(art minutes, discussion minutes); 0.0 for an absent discussion phase."""

    art = _phase_minutes(session.art_phase, "art_phase")
    discussion = _phase_minutes(session.discussion_phase, "discussion_phase")
    return art, discussion
