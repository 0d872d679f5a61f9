from arthomework.core.timeutil import epoch_ms, from_epoch_ms, from_iso, to_iso, utc_now
from arthomework.core.types import (
    ArtworkRecord,
    ClientProfile,
    HomeworkSession,
    PhaseKind,
    PhaseRecord,
    Speaker,
    TherapistProfile,
    Utterance,
    UtteranceKind,
    new_id,
    session_durations,
    validate_session,
)

__all__ = [
    "ArtworkRecord",
    "ClientProfile",
    "HomeworkSession",
    "PhaseKind",
    "PhaseRecord",
    "Speaker",
    "TherapistProfile",
    "Utterance",
    "UtteranceKind",
    "epoch_ms",
    "from_epoch_ms",
    "from_iso",
    "new_id",
    "session_durations",
    "to_iso",
    "utc_now",
    "validate_session",
]
