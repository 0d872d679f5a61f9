from __future__ import annotations

from datetime import datetime, timedelta

import pytest

from arthomework.core.timeutil import UTC
from arthomework.core.types import (
    HomeworkSession,
    PhaseKind,
    PhaseRecord,
    Speaker,
    Utterance,
    UtteranceKind,
)
from arthomework.service.config import ApiConfig
from arthomework.service.state import ServiceState

T0 = datetime(2024, 6, 1, 10, 0, 0, tzinfo=UTC)


def ts(seconds: float = 0.0) -> datetime:
    return T0 + timedelta(seconds=seconds)


def speech(speaker: Speaker, text: str, at_s: float) -> Utterance:
    return Utterance(speaker, UtteranceKind.SPEECH, text, ts(at_s))


def make_session(
    session_id: str = "ses-1",
    client_id: str = "c1",
    art_minutes: float = 11.3,
    discussion_minutes: float | None = 19.0,
    art_transcript=None,
    discussion_transcript=None,
) -> HomeworkSession:
    art_end = ts(art_minutes * 60)
    art = PhaseRecord(
        PhaseKind.ART_MAKING, art_transcript or [], started_at=ts(0), ended_at=art_end
    )
    discussion = None
    ended = art_end
    if discussion_minutes is not None:
        ended = art_end + timedelta(minutes=discussion_minutes)
        discussion = PhaseRecord(
            PhaseKind.DISCUSSION,
            discussion_transcript or [],
            started_at=art_end,
            ended_at=ended,
        )
    return HomeworkSession(
        session_id=session_id,
        client_id=client_id,
        profile_version=1,
        art_phase=art,
        discussion_phase=discussion,
        started_at=ts(0),
        ended_at=ended,
    )


@pytest.fixture
def service(tmp_path):
    state = ServiceState(
        ApiConfig(data_dir=tmp_path / "data", canvas_width=64, canvas_height=64),
        start_workers=True,
    )
    yield state
    state.shutdown()


@pytest.fixture
def offline_service(tmp_path):
    """State without queue workers, for tests that never generate."""

    return ServiceState(
        ApiConfig(data_dir=tmp_path / "data", canvas_width=64, canvas_height=64),
        start_workers=False,
    )
