"""Shared exception hierarchy.

Every domain error carries a stable ``code`` so the HTTP layer can map it
to a status without string-matching messages.
"""

from __future__ import annotations


class ArtHomeworkError(Exception):
    """Base class for all domain errors raised by this package."""

    code = "error"

    def __init__(self, message: str, **details: object) -> None:
        super().__init__(message)
        self.details = details

    def to_dict(self) -> dict:
        return {"code": self.code, "message": str(self), **self.details}


class NotFoundError(ArtHomeworkError):
    code = "not_found"


class PreconditionError(ArtHomeworkError):
    """A documented operation precondition does not hold."""

    code = "precondition_failed"


class TimestampError(ArtHomeworkError):
    """Missing or inconsistent timestamps on a phase or session."""

    code = "malformed_timestamp"


class UnknownConceptError(ArtHomeworkError):
    code = "unknown_concept"


class OutOfBoundsError(ArtHomeworkError):
    code = "geometry_out_of_bounds"


class EmptyCanvasError(ArtHomeworkError):
    code = "empty_canvas"


class QueueFullError(ArtHomeworkError):
    """Generation queue is at capacity; caller should back off and retry."""

    code = "queue_full"


class IllegalTransitionError(ArtHomeworkError):
    code = "illegal_job_transition"


class ProviderError(ArtHomeworkError):
    code = "provider_error"


class ProviderTimeoutError(ProviderError):
    code = "provider_timeout"


class ProviderTransportError(ProviderError):
    code = "provider_transport"


class MalformedReplyError(ProviderError):
    code = "provider_malformed_reply"


class UnauthorizedError(ArtHomeworkError):
    code = "unauthorized"


class TextTooLongError(ArtHomeworkError):
    code = "text_too_long"


class CorruptDocumentError(ArtHomeworkError):
    """Stored JSON document failed to parse; the file was quarantined."""

    code = "corrupt_document"


class DanglingRefError(ArtHomeworkError):
    code = "dangling_ref"
