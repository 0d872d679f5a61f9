"""Core domain types: validation, durations, serialization round trips."""

from __future__ import annotations

import copy

import pytest
from hypothesis import given, strategies as st

from arthomework.core.timeutil import from_iso, to_iso
from arthomework.core.types import (
    HomeworkSession,
    PhaseKind,
    PhaseRecord,
    Speaker,
    Utterance,
    UtteranceKind,
    session_durations,
    validate_session,
)
from arthomework.errors import TimestampError
from tests.conftest import make_session, speech, ts


class TestValidateSession:
    def test_well_formed_session_has_no_violations(self):
        session = make_session(
            art_transcript=[speech(Speaker.CLIENT, "hello", 1), speech(Speaker.AGENT, "hi", 2)],
            discussion_transcript=[speech(Speaker.CLIENT, "so", 700), speech(Speaker.AGENT, "mm", 701)],
        )
        assert validate_session(session) == []

    def test_session_ending_before_start_is_flagged(self):
        session = make_session()
        session.ended_at = ts(-60)
        violations = validate_session(session)
        assert any("session.ended_at" in v for v in violations)

    def test_double_opening_message_is_flagged(self):
        # [DERIVED] fixture: two opening messages can only violate once.
        opening = Utterance(Speaker.AGENT, UtteranceKind.OPENING_MESSAGE, "welcome", ts(0.5))
        second = Utterance(Speaker.AGENT, UtteranceKind.OPENING_MESSAGE, "welcome again", ts(1.5))
        session = make_session(art_transcript=[opening, second])
        violations = validate_session(session)
        assert [v for v in violations if "opening message" in v] == [
            "session: more than one opening message utterance"
        ]

    def test_opening_message_must_come_first(self):
        session = make_session(
            art_transcript=[
                speech(Speaker.CLIENT, "hello", 1),
                Utterance(Speaker.AGENT, UtteranceKind.OPENING_MESSAGE, "welcome", ts(2)),
            ]
        )
        assert any("must be the first" in v for v in violations_of(session))

    def test_draw_events_only_in_art_phase(self):
        draw = Utterance(Speaker.CLIENT, UtteranceKind.DRAW_EVENT, "I drew the sky.", ts(700))
        session = make_session(discussion_transcript=[draw])
        assert any("outside art phase" in v for v in violations_of(session))

    def test_out_of_order_transcript_is_flagged(self):
        session = make_session(
            art_transcript=[speech(Speaker.CLIENT, "b", 5), speech(Speaker.CLIENT, "a", 1)]
        )
        assert any("not strictly after" in v for v in violations_of(session))

    def test_validation_is_pure_and_idempotent(self):
        session = make_session()
        session.ended_at = ts(-60)
        before = copy.deepcopy(session.to_dict())
        first = validate_session(session)
        second = validate_session(session)
        assert first == second
        assert session.to_dict() == before


def violations_of(session):
    return validate_session(session)


class TestSessionDurations:
    def test_art_only_session(self):
        session = make_session(art_minutes=11.3, discussion_minutes=None)
        assert session_durations(session) == (11.3, 0.0)

    def test_dual_phase_session(self):
        # 11.3 / 19.0 minutes: the phase lengths the analytics fixtures center on.
        session = make_session(art_minutes=11.3, discussion_minutes=19.0)
        assert session_durations(session) == (11.3, 19.0)

    def test_zero_length_phase(self):
        session = make_session(art_minutes=0.0, discussion_minutes=None)
        assert session_durations(session) == (0.0, 0.0)

    def test_missing_phase_end_is_a_structured_error(self):
        session = make_session()
        session.art_phase.ended_at = None
        with pytest.raises(TimestampError):
            session_durations(session)

    def test_durations_match_phase_bounds_exactly(self):
        session = make_session(art_minutes=7.25, discussion_minutes=3.5)
        art, discussion = session_durations(session)
        art_span = session.art_phase.ended_at - session.art_phase.started_at
        disc_span = (
            session.discussion_phase.ended_at - session.discussion_phase.started_at
        )
        assert art * 60 == art_span.total_seconds()
        assert discussion * 60 == disc_span.total_seconds()


_speakers = st.sampled_from(list(Speaker))
_texts = st.text(min_size=0, max_size=40)
_offsets = st.lists(
    st.integers(min_value=1, max_value=5_000), min_size=0, max_size=6, unique=True
)


@given(_offsets, _speakers, _texts)
def test_session_serialization_round_trip(offsets, speaker, text):
    transcript = [
        Utterance(speaker, UtteranceKind.SPEECH, text, ts(offset))
        for offset in sorted(offsets)
    ]
    session = make_session(art_transcript=transcript)
    restored = HomeworkSession.from_dict(session.to_dict())
    assert restored == session
    assert restored.to_dict() == session.to_dict()


@given(st.integers(min_value=0, max_value=10**7))
def test_timestamp_iso_round_trip(ms):
    stamp = ts(ms / 1000.0)
    assert from_iso(to_iso(stamp)) == stamp


def test_phase_record_round_trip():
    phase = PhaseRecord(
        PhaseKind.ART_MAKING,
        [speech(Speaker.CLIENT, "hello", 1)],
        started_at=ts(0),
        ended_at=ts(60),
    )
    assert PhaseRecord.from_dict(phase.to_dict()) == phase
