"""Usage analytics: per-client overviews and cohort engagement aggregates.

Conventions (fixed, shared with the fixture seeder):
* a "message" is a transcript utterance of kind speech, either speaker;
* brush usage counts one per region, so a concept drawn as k disjoint
  regions in one artwork counts k times;
* durations are summed in whole milliseconds and only rounded for display.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import datetime, timedelta
from typing import Iterable, Optional
from zoneinfo import ZoneInfo

from arthomework.canvas.segments import SegmentMap
from arthomework.core.timeutil import epoch_ms
from arthomework.core.types import HomeworkSession, PhaseRecord, UtteranceKind
from arthomework.errors import PreconditionError

HOURS_PER_MS = 1.0 / 3_600_000.0


def _phase_ms(phase: Optional[PhaseRecord]) -> int:
    if phase is None or phase.started_at is None or phase.ended_at is None:
        return 0
    return max(0, epoch_ms(phase.ended_at) - epoch_ms(phase.started_at))


def _speech_count(phase: Optional[PhaseRecord]) -> int:
    if phase is None:
        return 0
    return sum(1 for u in phase.transcript if u.kind is UtteranceKind.SPEECH)


@dataclass
class UsageOverview:
    client_id: str
    sessions_by_date: dict[str, int]
    sessions_by_hour: list[int]  # 24 bins
    per_session_short_summaries: list[dict]

    def to_dict(self) -> dict:
        return {
            "client_id": self.client_id,
            "sessions_by_date": dict(self.sessions_by_date),
            "sessions_by_hour": list(self.sessions_by_hour),
            "per_session_short_summaries": list(self.per_session_short_summaries),
        }


@dataclass
class EngagementAggregate:
    n_clients: int = 0
    n_sessions: int = 0
    n_dual_phase: int = 0
    n_art_only: int = 0
    total_hours: float = 0.0
    art_hours: float = 0.0
    discussion_hours: float = 0.0
    n_messages: int = 0
    n_art_messages: int = 0
    n_discussion_messages: int = 0
    avg_sessions_per_client: float = 0.0
    avg_art_minutes: float = 0.0
    avg_discussion_minutes: float = 0.0

    def to_dict(self) -> dict:
        return {
            "n_clients": self.n_clients,
            "n_sessions": self.n_sessions,
            "n_dual_phase": self.n_dual_phase,
            "n_art_only": self.n_art_only,
            "total_hours": self.total_hours,
            "art_hours": self.art_hours,
            "discussion_hours": self.discussion_hours,
            "n_messages": self.n_messages,
            "n_art_messages": self.n_art_messages,
            "n_discussion_messages": self.n_discussion_messages,
            "avg_sessions_per_client": self.avg_sessions_per_client,
            "avg_art_minutes": self.avg_art_minutes,
            "avg_discussion_minutes": self.avg_discussion_minutes,
        }


@dataclass
class BrushFrequencyTable:
    rows: list[tuple[str, int]] = field(default_factory=list)

    def __post_init__(self) -> None:
        # Highest count first; alphabetical among equals, always.
        self.rows = sorted(self.rows, key=lambda row: (-row[1], row[0]))

    def to_dict(self) -> dict:
        return {"rows": [[concept, count] for concept, count in self.rows]}


def compute_overview(
    client_id: str,
    sessions: Iterable[HomeworkSession],
    date_from: datetime,
    date_to: datetime,
    tz_name: str = "UTC",
    summaries: Optional[dict[str, str]] = None,
) -> UsageOverview:
    """Date map and 24-bin hour histogram over sessions started in range."""

    if date_to < date_from:
        raise PreconditionError("date range is inverted")
    zone = ZoneInfo(tz_name)
    by_date: dict[str, int] = {}
    by_hour = [0] * 24
    shorts: list[dict] = []
    for session in sorted(
        (s for s in sessions if s.started_at is not None), key=lambda s: s.started_at
    ):
        if not date_from <= session.started_at <= date_to:
            continue
        local = session.started_at.astimezone(zone)
        key = local.date().isoformat()
        by_date[key] = by_date.get(key, 0) + 1
        by_hour[local.hour] += 1
        shorts.append(
            {
                "session_id": session.session_id,
                "started_at": key,
                "summary": (summaries or {}).get(session.session_id, ""),
            }
        )
    return UsageOverview(
        client_id=client_id,
        sessions_by_date=by_date,
        sessions_by_hour=by_hour,
        per_session_short_summaries=shorts,
    )


def aggregate_engagement(sessions: Iterable[HomeworkSession]) -> EngagementAggregate:
    sessions = list(sessions)
    clients = {s.client_id for s in sessions}
    art_ms = sum(_phase_ms(s.art_phase) for s in sessions)
    discussion_ms = sum(_phase_ms(s.discussion_phase) for s in sessions)
    n_dual = sum(1 for s in sessions if s.discussion_phase is not None)
    n_art_messages = sum(_speech_count(s.art_phase) for s in sessions)
    n_discussion_messages = sum(_speech_count(s.discussion_phase) for s in sessions)

    n_sessions = len(sessions)
    n_clients = len(clients)
    n_discussions = n_dual if n_dual else 1
    return EngagementAggregate(
        n_clients=n_clients,
        n_sessions=n_sessions,
        n_dual_phase=n_dual,
        n_art_only=n_sessions - n_dual,
        total_hours=(art_ms + discussion_ms) * HOURS_PER_MS,
        art_hours=art_ms * HOURS_PER_MS,
        discussion_hours=discussion_ms * HOURS_PER_MS,
        n_messages=n_art_messages + n_discussion_messages,
        n_art_messages=n_art_messages,
        n_discussion_messages=n_discussion_messages,
        avg_sessions_per_client=(n_sessions / n_clients) if n_clients else 0.0,
        avg_art_minutes=(art_ms / 60_000.0 / n_sessions) if n_sessions else 0.0,
        avg_discussion_minutes=(discussion_ms / 60_000.0 / n_discussions) if n_dual else 0.0,
    )


def brush_usage_stats(segment_maps: Iterable[SegmentMap]) -> BrushFrequencyTable:
    counts: dict[str, int] = {}
    for segment_map in segment_maps:
        for region in segment_map.regions:
            counts[region.concept] = counts.get(region.concept, 0) + 1
    return BrushFrequencyTable(rows=list(counts.items()))


def round_hours(value: float) -> float:
    """Presentation rounding: one decimal, only at the edge."""

    return round(value, 1)


def date_range_for(sessions: Iterable[HomeworkSession]) -> tuple[datetime, datetime]:
    starts = [s.started_at for s in sessions if s.started_at is not None]
    if not starts:
        raise PreconditionError("no dated sessions")
    return min(starts), max(starts) + timedelta(milliseconds=1)
