"""Synthetic engagement cohort with exact, documented marginals.

The builder distributes totals deterministically (base amount plus one
extra for the first k items) so every sum is exact in integer
milliseconds / counts:

* 24 clients across 5 therapists (5/5/5/5/4); 18 clients run 15 sessions
  and 6 run 14, for 354 sessions, 14.75 per client on average;
* every 4th session is art-only (88), the rest are dual-phase (266);
* art time totals 66.4 h (239,040,000 ms over 354 phases), discussion
  84.6 h (304,560,000 ms over 266 phases);
* speech messages: 772 in art phases (354x2 + 64), 2,690 in discussion
  phases (266x10 + 30);
* brush regions: Human 108, Cloud 72, Ocean 59, Grass 52, Tree 47,
  Lake 47, Flower 47, spread round-robin over one artwork per session;
* start times fall on 30 consecutive days, hours 13:00-23:00.
"""

from __future__ import annotations

from datetime import datetime, timedelta

from arthomework.canvas.control import render_control_image
from arthomework.canvas.segments import Region, SegmentMap
from arthomework.core.timeutil import UTC
from arthomework.core.types import (
    ArtworkRecord,
    HomeworkSession,
    PhaseKind,
    PhaseRecord,
    Speaker,
    Utterance,
    UtteranceKind,
)
from arthomework.history.records import SEGMENT_NAMESPACE
from arthomework.service.state import (
    ARTWORK_INDEX_NAMESPACE,
    SESSION_NAMESPACE,
    ServiceState,
)

N_CLIENTS = 24
N_THERAPISTS = 5
SESSIONS_TOTAL = 354
ART_TOTAL_MS = 239_040_000  # 66.4 hours
DISCUSSION_TOTAL_MS = 304_560_000  # 84.6 hours
DUAL_TOTAL = 266
ART_MESSAGES_TOTAL = 772
DISCUSSION_MESSAGES_TOTAL = 2_690

BRUSH_COUNTS = [
    ("Human", 108),
    ("Cloud", 72),
    ("Ocean", 59),
    ("Grass", 52),
    ("Tree", 47),
    ("Lake", 47),
    ("Flower", 47),
]

SEED_CANVAS = 64
SEED_START = datetime(2024, 6, 1, tzinfo=UTC)

_CLIENT_LINES = [
    "I drew what this week felt like and talked it through.",
    "Putting the shapes down made the feeling easier to name.",
    "I noticed I kept coming back to the same place in the picture.",
]
_AGENT_LINES = [
    "Thank you for sharing that with me.",
    "That sounds important. What stands out to you most?",
    "I hear you. Take your time with it.",
]


def _share(total: int, parts: int) -> list[int]:
    """Split total into `parts` integers: base everywhere, +1 for the first remainder."""

    base, extra = divmod(total, parts)
    return [base + (1 if index < extra else 0) for index in range(parts)]


def _region_assignments() -> list[list[str]]:
    """Round-robin the brush counts into one concept list per session."""

    remaining = {concept: count for concept, count in BRUSH_COUNTS}
    flat: list[str] = []
    while any(remaining.values()):
        for concept, _ in BRUSH_COUNTS:
            if remaining[concept] > 0:
                flat.append(concept)
                remaining[concept] -= 1
    per_session: list[list[str]] = [[] for _ in range(SESSIONS_TOTAL)]
    for index, concept in enumerate(flat):
        per_session[index % SESSIONS_TOTAL].append(concept)
    return per_session


def _speech(phase: PhaseRecord, count: int, start: datetime) -> None:
    for k in range(count):
        speaker = Speaker.CLIENT if k % 2 == 0 else Speaker.AGENT
        lines = _CLIENT_LINES if speaker is Speaker.CLIENT else _AGENT_LINES
        phase.transcript.append(
            Utterance(
                speaker=speaker,
                kind=UtteranceKind.SPEECH,
                text=lines[k % len(lines)],
                at=start + timedelta(seconds=1 + k),
            )
        )


def _segment_map(concepts: list[str]) -> SegmentMap:
    segment_map = SegmentMap(SEED_CANVAS, SEED_CANVAS)
    for index, concept in enumerate(concepts):
        x0 = 4.0 + 6 * (index % 5)
        y0 = 4.0 + 6 * (index // 5)
        segment_map.regions.append(
            Region(
                concept=concept,
                polygon=[(x0, y0), (x0 + 20, y0), (x0 + 20, y0 + 20), (x0, y0 + 20)],
                z_order=index,
            )
        )
    return segment_map


def seed_engagement_cohort(state: ServiceState) -> dict:
    """Build the cohort into the service's data directory; returns a summary."""

    therapist_ids = [f"t{i + 1}" for i in range(N_THERAPISTS)]
    client_ids = [f"c{i + 1:02d}" for i in range(N_CLIENTS)]
    for therapist_id in therapist_ids:
        state.ensure_therapist(therapist_id, f"Therapist {therapist_id.upper()}")
    for index, client_id in enumerate(client_ids):
        therapist = therapist_ids[min(index // 5, N_THERAPISTS - 1)]
        state.ensure_client(client_id, f"Client {client_id.upper()}", therapist)

    sessions_per_client = [15] * 18 + [14] * 6  # 354 total
    art_ms = _share(ART_TOTAL_MS, SESSIONS_TOTAL)
    discussion_ms = _share(DISCUSSION_TOTAL_MS, DUAL_TOTAL)
    art_msgs = _share(ART_MESSAGES_TOTAL, SESSIONS_TOTAL)
    discussion_msgs = _share(DISCUSSION_MESSAGES_TOTAL, DUAL_TOTAL)
    regions_per_session = _region_assignments()

    global_index = 0
    dual_index = 0
    for client_index, client_id in enumerate(client_ids):
        for _ in range(sessions_per_client[client_index]):
            g = global_index
            art_only = g % 4 == 3 and (SESSIONS_TOTAL - DUAL_TOTAL) > g // 4
            day = g % 30
            started = SEED_START + timedelta(
                days=day, hours=13 + (g % 11), minutes=(g * 7) % 60
            )
            art_end = started + timedelta(milliseconds=art_ms[g])
            art_phase = PhaseRecord(
                PhaseKind.ART_MAKING, [], started_at=started, ended_at=art_end
            )
            _speech(art_phase, art_msgs[g], started)

            discussion_phase = None
            ended = art_end
            if not art_only:
                ended = art_end + timedelta(milliseconds=discussion_ms[dual_index])
                discussion_phase = PhaseRecord(
                    PhaseKind.DISCUSSION, [], started_at=art_end, ended_at=ended
                )
                _speech(discussion_phase, discussion_msgs[dual_index], art_end)
                dual_index += 1

            session_id = f"ses-seed-{g + 1:04d}"
            artwork_id = f"art-seed-{g + 1:04d}"
            concepts = regions_per_session[g]
            segment_map = _segment_map(concepts)
            state.docs.save(SEGMENT_NAMESPACE, artwork_id, segment_map.to_dict())
            control_ref = state.docs.save_bytes(
                f"images/{artwork_id}-control.png",
                render_control_image(segment_map, state.catalog),
            )
            artwork = ArtworkRecord(
                artwork_id=artwork_id,
                segment_map_ref=f"{SEGMENT_NAMESPACE}/{artwork_id}.json",
                control_image_ref=control_ref,
                style="watercolor painting",
                prompt_used=", ".join(c.lower() for c in concepts) or "blank canvas",
                generated_at=art_end,
            )
            state.docs.save(ARTWORK_INDEX_NAMESPACE, artwork_id, {"session_id": session_id})

            session = HomeworkSession(
                session_id=session_id,
                client_id=client_id,
                profile_version=1,
                art_phase=art_phase,
                discussion_phase=discussion_phase,
                artworks=[artwork],
                started_at=started,
                ended_at=ended,
            )
            state.docs.save(SESSION_NAMESPACE, session_id, session.to_dict())
            global_index += 1

    aggregate = state.engagement()
    return {
        "clients": len(client_ids),
        "therapists": len(therapist_ids),
        "sessions": global_index,
        "engagement": aggregate.to_dict(),
    }
