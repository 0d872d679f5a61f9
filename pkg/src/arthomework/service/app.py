"""HTTP facade: the 15-endpoint catalog plus /health.

Speech is folded into the utterance/turn endpoints by content negotiation:
a body may carry ``text`` or ``audio_b64`` (transcribed server-side), and
``want_audio`` asks for a synthesized reply reference.

Every mutating endpoint honors the ``Idempotency-Key`` header: a retry with
the same key replays the stored response instead of re-running the handler.
"""

from __future__ import annotations

import base64
import threading
import uuid
from contextlib import asynccontextmanager
from datetime import datetime, time as dtime
from typing import Optional
from zoneinfo import ZoneInfo

from fastapi import Depends, FastAPI, Request, Response
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field
from starlette.middleware.base import BaseHTTPMiddleware

from arthomework.core.timeutil import UTC
from arthomework.errors import (
    ArtHomeworkError,
    CorruptDocumentError,
    EmptyCanvasError,
    NotFoundError,
    OutOfBoundsError,
    PreconditionError,
    ProviderError,
    QueueFullError,
    TextTooLongError,
    UnauthorizedError,
    UnknownConceptError,
)
from arthomework.service.auth import Principal
from arthomework.service.config import ApiConfig
from arthomework.service.state import ServiceState

_STATUS_BY_ERROR = [
    (QueueFullError, 429),
    (NotFoundError, 404),
    (UnknownConceptError, 400),
    (OutOfBoundsError, 400),
    (EmptyCanvasError, 400),
    (TextTooLongError, 400),
    (PreconditionError, 409),
    (ProviderError, 502),
    (CorruptDocumentError, 500),
]


def _status_for(exc: ArtHomeworkError) -> int:
    if isinstance(exc, UnauthorizedError):
        return 401 if exc.details.get("reason") == "unknown_token" else 403
    for error_type, status in _STATUS_BY_ERROR:
        if isinstance(exc, error_type):
            return status
    return 500


class IdempotencyMiddleware(BaseHTTPMiddleware):
    def __init__(self, app) -> None:
        super().__init__(app)
        self._cache: dict[tuple, tuple[int, bytes, str]] = {}
        self._lock = threading.Lock()

    async def dispatch(self, request: Request, call_next):
        key = request.headers.get("Idempotency-Key")
        if not key or request.method not in ("POST", "PUT", "DELETE"):
            return await call_next(request)
        cache_key = (request.method, request.url.path, key)
        with self._lock:
            hit = self._cache.get(cache_key)
        if hit is not None:
            status, body, media_type = hit
            return Response(
                content=body,
                status_code=status,
                media_type=media_type,
                headers={"X-Idempotent-Replay": "true"},
            )
        response = await call_next(request)
        body = b""
        async for chunk in response.body_iterator:
            body += chunk
        media_type = response.media_type or "application/json"
        if response.status_code < 500:
            with self._lock:
                self._cache[cache_key] = (response.status_code, body, media_type)
        return Response(
            content=body,
            status_code=response.status_code,
            media_type=media_type,
            headers=dict(response.headers),
        )


# -- request bodies ------------------------------------------------------------


class CreateSessionBody(BaseModel):
    client_id: str
    width: Optional[int] = None
    height: Optional[int] = None


class StrokeBody(BaseModel):
    concept: str
    polygon: list[tuple[float, float]] = Field(min_length=3)


class UtteranceBody(BaseModel):
    text: Optional[str] = None
    audio_b64: Optional[str] = None
    want_audio: bool = False


class GenerateBody(BaseModel):
    style: Optional[str] = None
    reuse_prompt_from: Optional[str] = None


class PrincipleBody(BaseModel):
    statement: str
    example_questions: list[str] = Field(min_length=1)
    principle_id: Optional[str] = None


class PrinciplesUpdateBody(BaseModel):
    permutation: Optional[list[int]] = None
    principle: Optional[PrincipleBody] = None
    position: Optional[int] = None


class TextBody(BaseModel):
    text: str = ""


def create_app(config: Optional[ApiConfig] = None, state: Optional[ServiceState] = None) -> FastAPI:
    if state is None:
        if config is None:
            raise ValueError("create_app needs a config or a prebuilt state")
        state = ServiceState(config)

    @asynccontextmanager
    async def lifespan(_: FastAPI):
        state.queue.start()
        yield
        state.shutdown()

    app = FastAPI(title="arthomework", lifespan=lifespan)
    app.state.service = state
    app.add_middleware(IdempotencyMiddleware)

    @app.exception_handler(ArtHomeworkError)
    async def domain_error_handler(_: Request, exc: ArtHomeworkError):
        return JSONResponse(status_code=_status_for(exc), content={"error": exc.to_dict()})

    def principal(request: Request) -> Principal:
        header = request.headers.get("Authorization", "")
        token = header[7:] if header.startswith("Bearer ") else request.headers.get("X-Auth-Token")
        try:
            return state.tokens.authenticate(token)
        except UnauthorizedError:
            raise UnauthorizedError("unknown or missing token", reason="unknown_token") from None

    def resolve_text(session_id: str, body: UtteranceBody) -> str:
        if body.text:
            return body.text
        if body.audio_b64:
            return state.stt.transcribe(base64.b64decode(body.audio_b64))
        return ""

    def reply_audio(session_id: str, text: str, want_audio: bool) -> Optional[str]:
        if not want_audio or not text:
            return None
        audio = state.tts.synthesize(text)
        return state.docs.save_bytes(f"audio/{session_id}/{uuid.uuid4().hex}.wav", audio)

    @app.get("/health")
    async def health():
        return {"status": "ready", "pending_jobs": state.queue.pending_count()}

    _MEDIA_TYPES = {".png": "image/png", ".wav": "audio/wav", ".json": "application/json"}

    @app.get("/files/{ref:path}")
    async def get_file(ref: str, who: Principal = Depends(principal)):
        # Serves stored artifacts (control/generated images, reply audio) to
        # any authenticated principal; not part of the API catalog proper.
        data = state.docs.load_bytes(ref)
        suffix = "." + ref.rsplit(".", 1)[-1] if "." in ref else ""
        return Response(content=data, media_type=_MEDIA_TYPES.get(suffix, "application/octet-stream"))

    # 1
    @app.post("/sessions", status_code=201)
    async def create_session(body: CreateSessionBody, who: Principal = Depends(principal)):
        if who.role != "client" or who.id != body.client_id:
            raise UnauthorizedError("sessions are created by the client they belong to")
        session = state.create_session(body.client_id, body.width, body.height)
        profile = state.profiles.resolve(body.client_id, session.profile_version)
        return {
            "session": session.to_dict(),
            "homework_task": profile.homework_task,
            "opening_message": profile.opening_message,
        }

    def _own_session(who: Principal, session_id: str) -> None:
        client_id = state.client_id_for_session(session_id)
        if who.role != "client" or who.id != client_id:
            raise UnauthorizedError("only the session's client may do this")

    # 2
    @app.post("/sessions/{session_id}/strokes")
    async def post_stroke(
        session_id: str, body: StrokeBody, who: Principal = Depends(principal)
    ):
        _own_session(who, session_id)
        return state.add_stroke(session_id, body.concept, [tuple(p) for p in body.polygon])

    # 3
    @app.post("/sessions/{session_id}/art-utterances")
    async def post_art_utterance(
        session_id: str, body: UtteranceBody, who: Principal = Depends(principal)
    ):
        _own_session(who, session_id)
        text = resolve_text(session_id, body)
        if not text:
            raise PreconditionError("provide text or audio_b64")
        utterance = state.add_art_utterance(session_id, text)
        return {"utterance": utterance.to_dict(), "transcribed_text": text}

    # 4
    @app.post("/sessions/{session_id}/generate", status_code=202)
    async def post_generate(
        session_id: str, body: GenerateBody, who: Principal = Depends(principal)
    ):
        _own_session(who, session_id)
        return state.start_generation(session_id, body.style, body.reuse_prompt_from)

    # 5
    @app.get("/jobs/{job_id}")
    async def get_job(job_id: str, who: Principal = Depends(principal)):
        client_id = state.client_id_for_job(job_id)
        state.require_client_or_therapist(who, client_id)
        return state.poll_job(job_id).to_dict()

    # 6
    @app.post("/sessions/{session_id}/discussion-turns")
    async def post_discussion_turn(
        session_id: str, body: UtteranceBody, who: Principal = Depends(principal)
    ):
        _own_session(who, session_id)
        text = resolve_text(session_id, body)
        result = state.discussion_turn(session_id, text or None)
        audio_ref = reply_audio(session_id, result["utterance"]["text"], body.want_audio)
        if audio_ref:
            result["audio_ref"] = audio_ref
        return result

    # 7
    @app.post("/sessions/{session_id}/close")
    async def post_close(session_id: str, who: Principal = Depends(principal)):
        _own_session(who, session_id)
        return state.close_session(session_id).to_dict()

    # 8
    @app.get("/clients/{client_id}/sessions")
    async def get_sessions(client_id: str, who: Principal = Depends(principal)):
        state.require_client_or_therapist(who, client_id)
        return {"sessions": [s.to_dict() for s in state.sessions_for_client(client_id)]}

    # 9
    @app.get("/sessions/{session_id}/record")
    async def get_record(session_id: str, who: Principal = Depends(principal)):
        client_id = state.client_id_for_session(session_id)
        state.require_therapist_of(who, client_id)
        return state.get_record(session_id).to_dict()

    def _parse_date(raw: Optional[str], end: bool) -> Optional[datetime]:
        if raw is None:
            return None
        day = datetime.fromisoformat(raw).date()
        moment = dtime(23, 59, 59, 999000) if end else dtime(0, 0)
        return datetime.combine(day, moment, tzinfo=ZoneInfo(state.config.timezone)).astimezone(UTC)

    # 10
    @app.get("/clients/{client_id}/overview")
    async def get_overview(
        client_id: str,
        date_from: Optional[str] = None,
        date_to: Optional[str] = None,
        who: Principal = Depends(principal),
    ):
        state.require_therapist_of(who, client_id)
        overview = state.overview(
            client_id, _parse_date(date_from, end=False), _parse_date(date_to, end=True)
        )
        return overview.to_dict()

    # 11
    @app.get("/clients/{client_id}/brush-stats")
    async def get_brush_stats(client_id: str, who: Principal = Depends(principal)):
        state.require_therapist_of(who, client_id)
        return state.brush_stats(client_id).to_dict()

    # 12
    @app.put("/clients/{client_id}/profile/principles")
    async def put_principles(
        client_id: str, body: PrinciplesUpdateBody, who: Principal = Depends(principal)
    ):
        state.require_therapist_of(who, client_id)
        if body.permutation is not None:
            profile = state.profiles.reorder_principles(client_id, who.id, body.permutation)
        elif body.principle is not None and body.position is not None:
            profile = state.profiles.upsert_principle(
                client_id,
                who.id,
                statement=body.principle.statement,
                example_questions=body.principle.example_questions,
                position=body.position,
                principle_id=body.principle.principle_id,
            )
        else:
            raise PreconditionError("provide either a permutation or a principle with a position")
        return profile.to_dict()

    # 13
    @app.put("/clients/{client_id}/profile/task")
    async def put_task(client_id: str, body: TextBody, who: Principal = Depends(principal)):
        state.require_therapist_of(who, client_id)
        return state.profiles.set_homework_task(client_id, who.id, body.text).to_dict()

    # 14
    @app.put("/clients/{client_id}/profile/opening-message")
    async def put_opening(client_id: str, body: TextBody, who: Principal = Depends(principal)):
        state.require_therapist_of(who, client_id)
        return state.profiles.set_opening_message(client_id, who.id, body.text).to_dict()

    # 15
    @app.get("/clients/{client_id}/profile")
    async def get_profile(
        client_id: str, version: Optional[int] = None, who: Principal = Depends(principal)
    ):
        state.require_therapist_of(who, client_id)
        return state.profiles.resolve(client_id, version).to_dict()

    return app
