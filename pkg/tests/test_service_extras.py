"""Cross-cutting service behaviors: HTTP provider error kinds, regeneration
prompt reuse, inactivity timeout, audit log persistence, round trips."""

from __future__ import annotations

import json
import time
from datetime import timedelta

import httpx
import pytest

from arthomework.agents.discussion import DialogueState
from arthomework.agents.providers import ChatRequest, HttpChatProvider
from arthomework.agents.summaries import SummaryReport
from arthomework.canvas.jobs import TERMINAL_STATUSES, GenerationJob, JobStatus
from arthomework.canvas.providers import HttpImageProvider, ImageRequest
from arthomework.core.timeutil import utc_now
from arthomework.errors import (
    MalformedReplyError,
    PreconditionError,
    ProviderTimeoutError,
    ProviderTransportError,
)
from arthomework.history.records import HistoryRecord
from arthomework.service.config import ApiConfig
from arthomework.service.state import ServiceState

RECT = [(2.0, 2.0), (30.0, 2.0), (30.0, 30.0), (2.0, 30.0)]


def _patch_httpx_post(monkeypatch, behavior):
    def fake_post(url, json=None, timeout=None):
        return behavior(url, json, timeout)

    monkeypatch.setattr(httpx, "post", fake_post)


class _FakeResponse:
    def __init__(self, payload, status_code=200):
        self._payload = payload
        self.status_code = status_code

    def raise_for_status(self):
        if self.status_code >= 400:
            raise httpx.HTTPStatusError("boom", request=None, response=None)

    def json(self):
        if isinstance(self._payload, Exception):
            raise self._payload
        return self._payload


class TestHttpProviderErrorKinds:
    def test_chat_timeout(self, monkeypatch):
        def behavior(url, payload, timeout):
            raise httpx.ReadTimeout("slow")

        _patch_httpx_post(monkeypatch, behavior)
        with pytest.raises(ProviderTimeoutError):
            HttpChatProvider("http://chat.test").complete(
                ChatRequest.build("s", [("user", "hi")])
            )

    def test_chat_transport_failure_on_5xx(self, monkeypatch):
        _patch_httpx_post(monkeypatch, lambda *a: _FakeResponse({}, status_code=502))
        with pytest.raises(ProviderTransportError):
            HttpChatProvider("http://chat.test").complete(
                ChatRequest.build("s", [("user", "hi")])
            )

    def test_chat_malformed_reply(self, monkeypatch):
        _patch_httpx_post(monkeypatch, lambda *a: _FakeResponse({"nope": 1}))
        with pytest.raises(MalformedReplyError):
            HttpChatProvider("http://chat.test").complete(
                ChatRequest.build("s", [("user", "hi")])
            )

    def test_chat_happy_path_sends_the_wire_format(self, monkeypatch):
        seen = {}

        def behavior(url, payload, timeout):
            seen.update(url=url, payload=payload, timeout=timeout)
            return _FakeResponse({"reply": "hello back"})

        _patch_httpx_post(monkeypatch, behavior)
        reply = HttpChatProvider("http://chat.test", timeout_s=12.5).complete(
            ChatRequest.build("sys", [("user", "hi")])
        )
        assert reply == "hello back"
        assert seen["payload"] == {
            "system": "sys",
            "messages": [{"role": "user", "text": "hi"}],
        }
        assert seen["timeout"] == 12.5

    def test_image_malformed_when_not_png(self, monkeypatch):
        _patch_httpx_post(monkeypatch, lambda *a: _FakeResponse({"image": "bm90cG5n"}))
        with pytest.raises(MalformedReplyError):
            HttpImageProvider("http://img.test").generate(
                ImageRequest(prompt="p", control_png=b"x", style="s")
            )

    def test_image_timeout(self, monkeypatch):
        def behavior(url, payload, timeout):
            raise httpx.ConnectTimeout("no route")

        _patch_httpx_post(monkeypatch, behavior)
        with pytest.raises(ProviderTimeoutError):
            HttpImageProvider("http://img.test").generate(
                ImageRequest(prompt="p", control_png=b"x", style="s")
            )


def _wait_done(service, job_id, timeout_s=10.0):
    deadline = time.monotonic() + timeout_s
    while time.monotonic() < deadline:
        job = service.poll_job(job_id)
        if job.status in TERMINAL_STATUSES:
            return job
        time.sleep(0.01)
    raise AssertionError("job stuck")


class TestRegeneration:
    def test_reuse_prompt_flag_skips_reassembly(self, service):
        service.ensure_client("remy", "Remy", "thea")
        session = service.create_session("remy")
        sid = session.session_id
        service.add_stroke(sid, "Ocean", RECT)
        service.add_art_utterance(sid, "a gray ocean")
        first = service.start_generation(sid, "sketch")
        _wait_done(service, first["job_id"])

        # the canvas changes; a plain regenerate re-runs assembly...
        service.add_stroke(sid, "Grass", [(32.0, 32.0), (60.0, 32.0), (60.0, 60.0), (32.0, 60.0)])
        service.add_art_utterance(sid, "soft grass")
        rerun = service.start_generation(sid, "sketch")
        assert rerun["prompt"] != first["prompt"]
        assert "grass" in rerun["prompt"]

        # ...while reuse_prompt_from pins the original prompt
        reused = service.start_generation(sid, "sketch", reuse_prompt_from=first["artwork_id"])
        assert reused["prompt"] == first["prompt"]
        assert reused["artwork_id"] != first["artwork_id"]


class TestInactivityTimeout:
    def test_stale_session_closes_at_last_activity(self, tmp_path):
        config = ApiConfig(
            data_dir=tmp_path / "data",
            canvas_width=32,
            canvas_height=32,
            session_timeout_minutes=0,  # any inactivity closes the session
        )
        service = ServiceState(config, start_workers=False)
        service.ensure_client("tess", "Tess", "thea")
        session = service.create_session("tess")
        time.sleep(0.01)
        reloaded = service._load_session(session.session_id)
        assert reloaded.ended_at is not None
        with pytest.raises(PreconditionError):
            service.add_art_utterance(session.session_id, "too late")


class TestExchangeAuditPersistence:
    def test_exchanges_are_appended_as_jsonl(self, service):
        service.ensure_client("uma", "Uma", "thea")
        session = service.create_session("uma")
        service.add_stroke(session.session_id, "Tree", RECT)
        log_path = service.docs.root / "exchanges.jsonl"
        lines = [json.loads(line) for line in log_path.read_text().splitlines()]
        assert lines
        assert lines[-1]["provider_id"] == "mock-chat"
        assert lines[-1]["reply"] == "What kind of tree is this?"


class TestRemainingRoundTrips:
    def test_generation_job_round_trip(self):
        job = GenerationJob(
            job_id="j1",
            artwork_id="a1",
            prompt="p",
            control_image_ref="images/a1.png",
            style="sketch",
            status=JobStatus.FAILED,
            enqueued_at=utc_now(),
            finished_at=utc_now() + timedelta(seconds=1),
            failure_reason="boom",
        )
        assert GenerationJob.from_dict(job.to_dict()) == job

    def test_dialogue_state_round_trip(self):
        state = DialogueState(
            session_id="s", current_step=3, concluded=False,
            extension_used_this_step=True, turns=5,
        )
        assert DialogueState.from_dict(state.to_dict()) == state

    def test_summary_report_round_trip(self):
        report = SummaryReport(
            session_id="s",
            art_summary="made a tree",
            discussion_summary="talked about it",
            therapist_questions=["Why a tree?", "Why so tall?"],
        )
        assert SummaryReport.from_dict(report.to_dict()) == report

    def test_history_record_round_trip(self):
        record = HistoryRecord(
            session_id="s",
            segments_ref="segments/a.json",
            process_frames=["images/f1.png"],
            artwork_ref="images/a-generated.png",
            control_image_ref="images/a-control.png",
            dialogue={"art": [], "discussion": []},
            art_summary="a",
            discussion_summary="d",
            therapist_questions=["Q1?", "Q2?"],
            input_fingerprint="abc",
        )
        assert HistoryRecord.from_dict(record.to_dict()) == record
