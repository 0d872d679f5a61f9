"""UTC timestamps with millisecond precision.

All persisted timestamps are UTC and quantized to whole milliseconds; the
wire format is ISO-8601 with a trailing ``Z``. Rendering in a local zone is
a presentation concern (see the service config's ``timezone`` key).
"""

from __future__ import annotations

from datetime import datetime, timedelta, timezone

from arthomework.errors import TimestampError

UTC = timezone.utc

_MS = timedelta(milliseconds=1)


def quantize_ms(value: datetime) -> datetime:
    """Truncate to millisecond precision, normalizing to UTC."""

    if value.tzinfo is None:
        raise TimestampError("naive datetime; timestamps must carry a timezone")
    value = value.astimezone(UTC)
    return value.replace(microsecond=(value.microsecond // 1000) * 1000)


def utc_now() -> datetime:
    return quantize_ms(datetime.now(UTC))


def to_iso(value: datetime) -> str:
    return quantize_ms(value).isoformat(timespec="milliseconds").replace("+00:00", "Z")


def from_iso(raw: str) -> datetime:
    if not isinstance(raw, str):
        raise TimestampError(f"expected ISO-8601 string, got {type(raw).__name__}")
    text = raw[:-1] + "+00:00" if raw.endswith("Z") else raw
    try:
        parsed = datetime.fromisoformat(text)
    except ValueError as exc:
        raise TimestampError(f"invalid ISO-8601 timestamp: {raw!r}") from exc
    if parsed.tzinfo is None:
        raise TimestampError(f"timestamp missing timezone: {raw!r}")
    return quantize_ms(parsed)


def epoch_ms(value: datetime) -> int:
    # round() rather than int(): .timestamp() is a binary float and may sit an
    # ulp below the exact millisecond value.
    return round(quantize_ms(value).timestamp() * 1000)


def from_epoch_ms(ms: int) -> datetime:
    return datetime.fromtimestamp(ms / 1000.0, UTC)


def minutes_between(start: datetime, end: datetime) -> float:
    """Exact (end - start) in minutes, computed on whole milliseconds."""

    delta_ms = epoch_ms(end) - epoch_ms(start)
    return delta_ms / 60_000.0
