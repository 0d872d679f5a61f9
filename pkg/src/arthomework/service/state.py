"""Service orchestration: wires storage, canvas, agents, queue, and profiles.

All mutations of one session go through that session's lock (single-writer
discipline); distinct sessions proceed in parallel. The HTTP facade and the
CLI both drive this object, so the whole workflow runs offline too.
"""

from __future__ import annotations

import json
import threading
from dataclasses import replace
from datetime import timedelta
from pathlib import Path
from typing import Optional

from arthomework.agents.art_agent import art_phase_turn
from arthomework.agents.discussion import DialogueEngine, DialogueState
from arthomework.agents.providers import (
    ChatRequest,
    ExchangeLog,
    HttpChatProvider,
    HttpSpeechToText,
    HttpTextToSpeech,
    MockChatProvider,
    MockSpeechToText,
    MockTextToSpeech,
    provider_call,
)
from arthomework.canvas.catalog import default_catalog
from arthomework.canvas.control import render_control_image
from arthomework.canvas.jobs import GenerationJob, JobQueue, JobStatus
from arthomework.canvas.prompts import assemble_generation_prompt, render_art_transcript
from arthomework.canvas.providers import HttpImageProvider, MockImageProvider
from arthomework.canvas.segments import SegmentMap, stroke_utterances
from arthomework.canvas.styles import StyleRegistry
from arthomework.agents.templates import load_template
from arthomework.core.timeutil import utc_now
from arthomework.core.types import (
    ClientProfile,
    HomeworkSession,
    PhaseKind,
    PhaseRecord,
    Speaker,
    TherapistProfile,
    Utterance,
    UtteranceKind,
    new_id,
)
from arthomework.customization.store import ProfileStore
from arthomework.errors import (
    NotFoundError,
    PreconditionError,
    ProviderError,
    UnauthorizedError,
)
from arthomework.history.analytics import (
    BrushFrequencyTable,
    EngagementAggregate,
    UsageOverview,
    aggregate_engagement,
    brush_usage_stats,
    compute_overview,
)
from arthomework.history.export import export_history
from arthomework.history.records import (
    RECORD_NAMESPACE,
    SEGMENT_NAMESPACE,
    HistoryRecord,
    compile_session_record,
)
from arthomework.service.auth import Principal, TokenTable
from arthomework.service.config import ApiConfig
from arthomework.storage import DocumentStore

CLIENT_NAMESPACE = "clients"
THERAPIST_NAMESPACE = "therapists"
SESSION_NAMESPACE = "sessions"
JOB_NAMESPACE = "jobs"
CANVAS_NAMESPACE = "canvases"
DIALOGUE_NAMESPACE = "dialogue_states"
ARTWORK_INDEX_NAMESPACE = "artwork_index"

_MS = timedelta(milliseconds=1)


class ServiceState:
    def __init__(self, config: ApiConfig, start_workers: bool = True) -> None:
        config.check_data_dir_writable()
        self.config = config
        self.docs = DocumentStore(config.data_dir)
        self.catalog = default_catalog()
        self.styles = StyleRegistry()
        self.tokens = TokenTable(config.tokens)
        self.exchange_log = ExchangeLog(sink=self._persist_exchange)
        self._exchange_file_lock = threading.Lock()

        if config.chat_provider == "mock":
            self.chat = MockChatProvider(self.catalog.concepts(), config.language)
        else:
            self.chat = HttpChatProvider(config.chat_provider, config.provider_timeout_s)
        if config.tts_provider == "mock":
            self.tts = MockTextToSpeech()
        else:
            self.tts = HttpTextToSpeech(config.tts_provider, config.provider_timeout_s)
        if config.stt_provider == "mock":
            self.stt = MockSpeechToText()
        else:
            self.stt = HttpSpeechToText(config.stt_provider, config.provider_timeout_s)
        if config.image_provider == "mock":
            image_provider = MockImageProvider()
        else:
            image_provider = HttpImageProvider(config.image_provider, config.provider_timeout_s)

        self.queue = JobQueue(
            provider=image_provider,
            image_sink=self._store_generated_image,
            capacity=config.queue_capacity,
            worker_count=config.worker_count,
            persist=self._persist_job,
            on_completed=self._on_job_completed,
        )
        self.profiles = ProfileStore(
            self.docs, self.assigned_therapist, config.text_limit_bytes
        )

        self._session_locks: dict[str, threading.RLock] = {}
        self._locks_guard = threading.Lock()

        for therapist in config.provision.get("therapists", []):
            self.ensure_therapist(therapist["id"], therapist.get("name", therapist["id"]))
        for client in config.provision.get("clients", []):
            self.ensure_client(
                client["id"], client.get("name", client["id"]), client["therapist_id"]
            )

        self._recover_jobs()
        if start_workers:
            self.queue.start()

    # -- plumbing ---------------------------------------------------------

    def _persist_exchange(self, exchange) -> None:
        path = self.docs.root / "exchanges.jsonl"
        line = json.dumps(exchange.to_dict(), ensure_ascii=False, sort_keys=True)
        with self._exchange_file_lock:
            with open(path, "a", encoding="utf-8") as handle:
                handle.write(line + "\n")

    def _persist_job(self, job: GenerationJob) -> None:
        self.docs.save(JOB_NAMESPACE, job.job_id, job.to_dict())

    def _store_generated_image(self, artwork_id: str, png: bytes) -> str:
        return self.docs.save_bytes(f"images/{artwork_id}-generated.png", png)

    def _on_job_completed(self, job: GenerationJob) -> None:
        try:
            index = self.docs.load(ARTWORK_INDEX_NAMESPACE, job.artwork_id)
        except NotFoundError:
            return
        session_id = index["session_id"]
        with self._lock_for(session_id):
            session = self._load_session(session_id)
            for artwork in session.artworks:
                if artwork.artwork_id == job.artwork_id:
                    artwork.generated_image_ref = job.generated_image_ref
            self._save_session(session)

    def _recover_jobs(self) -> None:
        for job_id in self.docs.list_ids(JOB_NAMESPACE):
            job = GenerationJob.from_dict(self.docs.load(JOB_NAMESPACE, job_id))
            if job.status in (JobStatus.QUEUED, JobStatus.RUNNING):
                try:
                    control_png = self.docs.load_bytes(job.control_image_ref)
                except NotFoundError:
                    continue
                self.queue.resume(job, control_png)

    def shutdown(self) -> bool:
        return self.queue.shutdown(self.config.shutdown_drain_timeout_s)

    def _lock_for(self, session_id: str) -> threading.RLock:
        with self._locks_guard:
            if session_id not in self._session_locks:
                self._session_locks[session_id] = threading.RLock()
            return self._session_locks[session_id]

    # -- provisioning -------------------------------------------------------

    def ensure_therapist(self, therapist_id: str, display_name: str) -> TherapistProfile:
        try:
            profile = TherapistProfile.from_dict(
                self.docs.load(THERAPIST_NAMESPACE, therapist_id)
            )
        except NotFoundError:
            profile = TherapistProfile(therapist_id=therapist_id, display_name=display_name)
            self.docs.save(THERAPIST_NAMESPACE, therapist_id, profile.to_dict())
        return profile

    def ensure_client(
        self,
        client_id: str,
        display_name: str,
        therapist_id: str,
        goals: Optional[list[str]] = None,
    ) -> ClientProfile:
        therapist = self.ensure_therapist(therapist_id, therapist_id)
        try:
            client = ClientProfile.from_dict(self.docs.load(CLIENT_NAMESPACE, client_id))
        except NotFoundError:
            client = ClientProfile(
                client_id=client_id,
                display_name=display_name,
                therapist_id=therapist_id,
                goals=goals or [],
                created_at=utc_now(),
            )
            self.docs.save(CLIENT_NAMESPACE, client_id, client.to_dict())
            if client_id not in therapist.client_ids:
                therapist.client_ids.append(client_id)
                self.docs.save(THERAPIST_NAMESPACE, therapist_id, therapist.to_dict())
        self.profiles.ensure_default(client_id, therapist_id)
        return client

    def client(self, client_id: str) -> ClientProfile:
        return ClientProfile.from_dict(self.docs.load(CLIENT_NAMESPACE, client_id))

    def assigned_therapist(self, client_id: str) -> str:
        return self.client(client_id).therapist_id

    def therapist_name(self, therapist_id: str) -> str:
        try:
            return TherapistProfile.from_dict(
                self.docs.load(THERAPIST_NAMESPACE, therapist_id)
            ).display_name
        except NotFoundError:
            return therapist_id

    # -- authorization helpers -----------------------------------------------

    def require_therapist_of(self, principal: Principal, client_id: str) -> None:
        if principal.role != "therapist":
            raise UnauthorizedError("therapist role required")
        if self.assigned_therapist(client_id) != principal.id:
            raise UnauthorizedError(
                f"therapist {principal.id!r} is not assigned to client {client_id!r}"
            )

    def require_client_or_therapist(self, principal: Principal, client_id: str) -> None:
        if principal.role == "client":
            if principal.id != client_id:
                raise UnauthorizedError("clients may only access their own data")
            return
        self.require_therapist_of(principal, client_id)

    def client_id_for_session(self, session_id: str) -> str:
        return self._load_session(session_id).client_id

    def client_id_for_job(self, job_id: str) -> str:
        job = self.queue.poll(job_id)
        index = self.docs.load(ARTWORK_INDEX_NAMESPACE, job.artwork_id)
        return self.client_id_for_session(index["session_id"])

    # -- session plumbing ------------------------------------------------------

    def _load_session(self, session_id: str) -> HomeworkSession:
        session = HomeworkSession.from_dict(self.docs.load(SESSION_NAMESPACE, session_id))
        return self._maybe_close_stale(session)

    def _save_session(self, session: HomeworkSession) -> None:
        self.docs.save(SESSION_NAMESPACE, session.session_id, session.to_dict())

    def _last_activity(self, session: HomeworkSession):
        latest = session.started_at
        for phase in (session.art_phase, session.discussion_phase):
            if phase is None:
                continue
            for utterance in phase.transcript:
                if latest is None or utterance.at > latest:
                    latest = utterance.at
        return latest or utc_now()

    def _maybe_close_stale(self, session: HomeworkSession) -> HomeworkSession:
        if session.ended_at is not None:
            return session
        last = self._last_activity(session)
        timeout = timedelta(minutes=self.config.session_timeout_minutes)
        if utc_now() - last > timeout:
            self._close(session, at=last)
        return session

    def _close(self, session: HomeworkSession, at=None) -> None:
        at = at or utc_now()
        if session.art_phase.ended_at is None:
            session.art_phase.ended_at = max(at, session.art_phase.started_at or at)
        if session.discussion_phase and session.discussion_phase.ended_at is None:
            session.discussion_phase.ended_at = max(
                at, session.discussion_phase.started_at or at
            )
        ends = [session.art_phase.ended_at]
        if session.discussion_phase:
            ends.append(session.discussion_phase.ended_at)
        session.ended_at = max(e for e in ends if e is not None)
        self._save_session(session)

    def _require_open(self, session: HomeworkSession) -> None:
        if session.ended_at is not None:
            raise PreconditionError(f"session {session.session_id} is closed")

    def _next_at(self, session: HomeworkSession):
        last = self._last_activity(session)
        now = utc_now()
        return now if now > last else last + _MS

    @staticmethod
    def _chat_history(phase: Optional[PhaseRecord]) -> list[tuple[str, str]]:
        if phase is None:
            return []
        history = []
        for utterance in phase.transcript:
            if utterance.kind is not UtteranceKind.SPEECH:
                continue
            role = "assistant" if utterance.speaker is Speaker.AGENT else "user"
            history.append((role, utterance.text))
        return history

    def _canvas_doc(self, session_id: str) -> dict:
        try:
            return self.docs.load(CANVAS_NAMESPACE, session_id)
        except NotFoundError:
            return {
                "segment_map": SegmentMap(
                    self.config.canvas_width, self.config.canvas_height
                ).to_dict(),
                "frames": [],
            }

    # -- client-facing operations ---------------------------------------------

    def create_session(
        self,
        client_id: str,
        width: Optional[int] = None,
        height: Optional[int] = None,
    ) -> HomeworkSession:
        self.client(client_id)  # raises NotFoundError for unknown clients
        profile = self.profiles.resolve(client_id)
        now = utc_now()
        session = HomeworkSession(
            session_id=new_id("ses"),
            client_id=client_id,
            profile_version=profile.version,
            art_phase=PhaseRecord(PhaseKind.ART_MAKING, [], started_at=now),
            started_at=now,
        )
        at = now
        if profile.opening_message:
            session.art_phase.transcript.append(
                Utterance(Speaker.AGENT, UtteranceKind.OPENING_MESSAGE, profile.opening_message, at)
            )
            at = at + _MS
        if profile.homework_task:
            session.art_phase.transcript.append(
                Utterance(Speaker.SYSTEM, UtteranceKind.TASK_DISPLAY, profile.homework_task, at)
            )
        canvas = {
            "segment_map": SegmentMap(
                width or self.config.canvas_width, height or self.config.canvas_height
            ).to_dict(),
            "frames": [],
        }
        self.docs.save(CANVAS_NAMESPACE, session.session_id, canvas)
        self._save_session(session)
        return session

    def add_stroke(self, session_id: str, concept: str, polygon) -> dict:
        with self._lock_for(session_id):
            session = self._load_session(session_id)
            self._require_open(session)
            if session.art_phase.ended_at is not None:
                raise PreconditionError("art phase is already closed")
            canvas = self._canvas_doc(session_id)
            segment_map = SegmentMap.from_dict(canvas["segment_map"])

            at = self._next_at(session)
            region, draw, note = stroke_utterances(
                segment_map, self.catalog, concept, polygon, at, at + _MS
            )
            session.art_phase.transcript.extend([draw, note])

            frame_ref = f"images/{session_id}/frame-{len(canvas['frames']) + 1:04d}.png"
            self.docs.save_bytes(frame_ref, render_control_image(segment_map, self.catalog))
            canvas["frames"].append(frame_ref)
            canvas["segment_map"] = segment_map.to_dict()

            question = art_phase_turn(
                region.concept,
                self.chat,
                self.exchange_log,
                history=self._chat_history(session.art_phase),
                language=self.config.language,
            )
            agent_utterance = None
            if question is not None:
                agent_utterance = Utterance(
                    Speaker.AGENT, UtteranceKind.SPEECH, question, at + 2 * _MS
                )
                session.art_phase.transcript.append(agent_utterance)

            self.docs.save(CANVAS_NAMESPACE, session_id, canvas)
            self._save_session(session)
            return {
                "region": region.to_dict(),
                "draw_event": draw.to_dict(),
                "canvas_note": note.to_dict(),
                "agent_utterance": agent_utterance.to_dict() if agent_utterance else None,
                "frame_ref": frame_ref,
            }

    def add_art_utterance(self, session_id: str, text: str) -> Utterance:
        with self._lock_for(session_id):
            session = self._load_session(session_id)
            self._require_open(session)
            if session.art_phase.ended_at is not None:
                raise PreconditionError("art phase is already closed")
            utterance = Utterance(
                Speaker.CLIENT, UtteranceKind.SPEECH, text, self._next_at(session)
            )
            session.art_phase.transcript.append(utterance)
            self._save_session(session)
            return utterance

    def _llm_prompt(self, session: HomeworkSession, style) -> str:
        system_prompt = load_template("art_system", self.config.language)
        rendered = render_art_transcript(session.art_phase.transcript)
        if style is not None:
            rendered += f"\nUSER: [user dialogue] Style: {style.name}"
        request = ChatRequest.build(system_prompt, [("user", rendered)])
        reply = provider_call(self.chat, request, self.exchange_log, retries=1)
        return reply.strip()

    def start_generation(
        self,
        session_id: str,
        style_name: Optional[str] = None,
        reuse_prompt_from: Optional[str] = None,
    ) -> dict:
        with self._lock_for(session_id):
            session = self._load_session(session_id)
            self._require_open(session)
            canvas = self._canvas_doc(session_id)
            segment_map = SegmentMap.from_dict(canvas["segment_map"])
            style = self.styles.get(style_name) if style_name else None

            if reuse_prompt_from:
                source = next(
                    (a for a in session.artworks if a.artwork_id == reuse_prompt_from), None
                )
                if source is None:
                    raise NotFoundError(
                        f"no artwork {reuse_prompt_from!r} in this session",
                        artwork_id=reuse_prompt_from,
                    )
                prompt = source.prompt_used
            elif self.config.generation_prompt_mode == "llm":
                try:
                    prompt = self._llm_prompt(session, style)
                except ProviderError:
                    prompt = assemble_generation_prompt(
                        session.art_phase.transcript, style, self.styles
                    )
            else:
                prompt = assemble_generation_prompt(
                    session.art_phase.transcript, style, self.styles
                )

            artwork_id = new_id("art")
            self.docs.save(SEGMENT_NAMESPACE, artwork_id, segment_map.to_dict())
            control_png = render_control_image(segment_map, self.catalog)
            control_ref = self.docs.save_bytes(f"images/{artwork_id}-control.png", control_png)

            from arthomework.core.types import ArtworkRecord

            artwork = ArtworkRecord(
                artwork_id=artwork_id,
                segment_map_ref=f"{SEGMENT_NAMESPACE}/{artwork_id}.json",
                control_image_ref=control_ref,
                style=style.name if style else "",
                prompt_used=prompt,
                generated_at=utc_now(),
                process_frames=list(canvas["frames"]),
            )
            session.artworks.append(artwork)
            self.docs.save(ARTWORK_INDEX_NAMESPACE, artwork_id, {"session_id": session_id})
            self._save_session(session)

            job_id = self.queue.enqueue(
                artwork_id=artwork_id,
                prompt=prompt,
                control_png=control_png,
                control_image_ref=control_ref,
                style=style.name if style else "",
            )
            return {"job_id": job_id, "artwork_id": artwork_id, "prompt": prompt}

    def poll_job(self, job_id: str) -> GenerationJob:
        return self.queue.poll(job_id)

    def _dialogue_state(self, session_id: str) -> DialogueState:
        try:
            return DialogueState.from_dict(self.docs.load(DIALOGUE_NAMESPACE, session_id))
        except NotFoundError:
            return DialogueState(session_id=session_id)

    def _dialogue_engine(self, session: HomeworkSession) -> DialogueEngine:
        profile = self.profiles.resolve(session.client_id, session.profile_version)
        therapist = self.therapist_name(self.assigned_therapist(session.client_id))
        return DialogueEngine(
            therapist_name=therapist,
            principles=profile.principles,
            provider=self.chat,
            log=self.exchange_log,
            language=self.config.language,
        )

    def discussion_turn(self, session_id: str, text: Optional[str] = None) -> dict:
        with self._lock_for(session_id):
            session = self._load_session(session_id)
            self._require_open(session)
            if not any(a.generated_image_ref for a in session.artworks):
                raise PreconditionError(
                    "discussion starts after at least one artwork has been generated"
                )
            if session.discussion_phase is None:
                now = self._next_at(session)
                if session.art_phase.ended_at is None:
                    session.art_phase.ended_at = now
                session.discussion_phase = PhaseRecord(
                    PhaseKind.DISCUSSION, [], started_at=now
                )

            state = self._dialogue_state(session_id)
            engine = self._dialogue_engine(session)
            history = self._chat_history(session.discussion_phase)

            if text:
                session.discussion_phase.transcript.append(
                    Utterance(Speaker.CLIENT, UtteranceKind.SPEECH, text, self._next_at(session))
                )
            if state.current_step == 0:
                turn = engine.open(state, history)
            else:
                if not text:
                    raise PreconditionError("a message is required after the opening turn")
                turn = engine.advance(state, text, history)

            agent_utterance = Utterance(
                Speaker.AGENT, UtteranceKind.SPEECH, turn.text, self._next_at(session)
            )
            session.discussion_phase.transcript.append(agent_utterance)
            self.docs.save(DIALOGUE_NAMESPACE, session_id, turn.state.to_dict())
            self._save_session(session)
            return {
                "utterance": agent_utterance.to_dict(),
                "kind": turn.kind,
                "step": turn.step,
                "degraded": turn.degraded,
                "state": turn.state.to_dict(),
            }

    def close_session(self, session_id: str) -> HomeworkSession:
        with self._lock_for(session_id):
            session = self._load_session(session_id)
            if session.ended_at is None:
                self._close(session)
            return session

    # -- therapist-facing operations -----------------------------------------

    def sessions_for_client(self, client_id: str) -> list[HomeworkSession]:
        sessions = []
        for doc_id in self.docs.list_ids(SESSION_NAMESPACE):
            payload = self.docs.load(SESSION_NAMESPACE, doc_id)
            if payload.get("client_id") == client_id:
                sessions.append(HomeworkSession.from_dict(payload))
        sessions.sort(key=lambda s: (s.started_at is None, s.started_at))
        return sessions

    def all_sessions(self) -> list[HomeworkSession]:
        return [
            HomeworkSession.from_dict(self.docs.load(SESSION_NAMESPACE, doc_id))
            for doc_id in self.docs.list_ids(SESSION_NAMESPACE)
        ]

    def get_record(self, session_id: str) -> HistoryRecord:
        with self._lock_for(session_id):
            session = self._load_session(session_id)
            if session.ended_at is None:
                raise PreconditionError("the session must be closed before compiling a record")
            return compile_session_record(
                session,
                self.docs,
                self.chat,
                self.exchange_log,
                word_limit=self.config.summary_word_limit,
                language=self.config.language,
            )

    def overview(self, client_id: str, date_from=None, date_to=None) -> UsageOverview:
        sessions = self.sessions_for_client(client_id)
        if date_from is None or date_to is None:
            starts = [s.started_at for s in sessions if s.started_at]
            if not starts:
                return UsageOverview(client_id, {}, [0] * 24, [])
            date_from = date_from or min(starts)
            date_to = date_to or max(starts)
        summaries = {}
        for session in sessions:
            if self.docs.exists(RECORD_NAMESPACE, session.session_id):
                record = self.docs.load(RECORD_NAMESPACE, session.session_id)
                words = str(record.get("art_summary", "")).split()
                summaries[session.session_id] = " ".join(words[:12])
        return compute_overview(
            client_id, sessions, date_from, date_to, self.config.timezone, summaries
        )

    def _segment_maps(self, sessions: list[HomeworkSession]) -> list[SegmentMap]:
        maps = []
        for session in sessions:
            for artwork in session.artworks:
                if self.docs.exists(SEGMENT_NAMESPACE, artwork.artwork_id):
                    maps.append(
                        SegmentMap.from_dict(
                            self.docs.load(SEGMENT_NAMESPACE, artwork.artwork_id)
                        )
                    )
        return maps

    def brush_stats(self, client_id: Optional[str] = None) -> BrushFrequencyTable:
        sessions = self.sessions_for_client(client_id) if client_id else self.all_sessions()
        return brush_usage_stats(self._segment_maps(sessions))

    def engagement(self) -> EngagementAggregate:
        return aggregate_engagement(self.all_sessions())

    def export_client(self, client_id: str, therapist_id: str, out_path: Path) -> Path:
        if self.assigned_therapist(client_id) != therapist_id:
            raise UnauthorizedError(
                f"therapist {therapist_id!r} is not assigned to client {client_id!r}"
            )
        return export_history(self.docs, client_id, out_path)
