"""Chat/speech provider clients, the deterministic mock, and the audit log.

Chat protocol: {system, messages: [(role, text), ...]} -> {reply}. Every
call is recorded verbatim as a ProviderExchange so each agent utterance can
be traced back to the exchange that produced it (or to a degraded-mode
marker when the provider was down).

The mock provider is rule-based so the whole suite runs offline:

* a final message starting with ``[suggested] `` is answered with exactly
  the suggested text (the orchestrator owns sequencing and supplies the
  default phrasing; a live provider would reword it);
* a questions-task system prompt gets two template questions about the two
  concept words most frequent in the transcript payload;
* a summary-task system prompt gets a speaker-tagged digest of first
  clauses.
"""

from __future__ import annotations

import json
import re
import threading
import time
import wave
import io
from dataclasses import dataclass, field
from datetime import datetime
from typing import Optional, Protocol

import httpx

from arthomework.agents.templates import load_template
from arthomework.core.timeutil import to_iso, utc_now
from arthomework.errors import (
    MalformedReplyError,
    ProviderTimeoutError,
    ProviderTransportError,
)

SUGGESTION_PREFIX = "[suggested] "


@dataclass(frozen=True)
class ChatRequest:
    system_prompt: str
    messages: tuple[tuple[str, str], ...]

    @staticmethod
    def build(system_prompt: str, messages: list[tuple[str, str]]) -> "ChatRequest":
        return ChatRequest(system_prompt=system_prompt, messages=tuple(messages))


@dataclass
class ProviderExchange:
    system_prompt: str
    messages: list[tuple[str, str]]
    reply: str
    latency_ms: float
    provider_id: str
    at: datetime = field(default_factory=utc_now)
    failed: bool = False
    error: Optional[str] = None

    def to_dict(self) -> dict:
        return {
            "system_prompt": self.system_prompt,
            "messages": [[role, text] for role, text in self.messages],
            "reply": self.reply,
            "latency_ms": self.latency_ms,
            "provider_id": self.provider_id,
            "at": to_iso(self.at),
            "failed": self.failed,
            "error": self.error,
        }


class ExchangeLog:
    """Append-only, thread-safe audit log of provider exchanges."""

    def __init__(self, sink=None) -> None:
        self._entries: list[ProviderExchange] = []
        self._lock = threading.Lock()
        self._sink = sink

    def append(self, exchange: ProviderExchange) -> None:
        with self._lock:
            self._entries.append(exchange)
            if self._sink is not None:
                self._sink(exchange)

    def entries(self) -> list[ProviderExchange]:
        with self._lock:
            return list(self._entries)


class ChatProvider(Protocol):
    provider_id: str

    def complete(self, request: ChatRequest) -> str: ...


class EchoChatProvider:
    """Smallest possible provider: replies with the last message's text."""

    provider_id = "echo"

    def complete(self, request: ChatRequest) -> str:
        return request.messages[-1][1] if request.messages else ""


def _first_clause(text: str) -> str:
    parts = re.split(r"[.;!?]", text, maxsplit=1)
    return parts[0].strip()


def _word_forms(word: str) -> set[str]:
    word = re.sub(r"^\W+|\W+$", "", word.lower())
    forms = {word}
    if len(word) > 3 and word.endswith("s"):
        forms.add(word[:-1])
    return forms


class MockChatProvider:
    """Deterministic offline provider; see the module docstring for its rules."""

    provider_id = "mock-chat"

    def __init__(self, concepts: Optional[list[str]] = None, language: str = "en") -> None:
        if concepts is None:
            from arthomework.canvas.catalog import default_catalog

            concepts = default_catalog().concepts()
        self._concepts = [c.lower() for c in concepts]
        self._language = language

    def complete(self, request: ChatRequest) -> str:
        if request.messages and request.messages[-1][1].startswith(SUGGESTION_PREFIX):
            return request.messages[-1][1][len(SUGGESTION_PREFIX):]
        if "internship assistant" in request.system_prompt:
            return self._two_questions(request)
        if "condense" in request.system_prompt:
            return self._digest(request)
        return request.messages[-1][1] if request.messages else ""

    def _payload_utterances(self, request: ChatRequest) -> list[dict]:
        for role, text in reversed(request.messages):
            if role != "user":
                continue
            try:
                payload = json.loads(text)
            except json.JSONDecodeError:
                continue
            if isinstance(payload, dict) and "transcript" in payload:
                return list(payload["transcript"])
            if isinstance(payload, list):
                return list(payload)
        return []

    def _two_questions(self, request: ChatRequest) -> str:
        counts: dict[str, int] = {}
        for utterance in self._payload_utterances(request):
            for raw in str(utterance.get("text", "")).split():
                matched = next(
                    (c for c in self._concepts if c in _word_forms(raw)), None
                )
                if matched is not None:
                    counts[matched] = counts.get(matched, 0) + 1
        top = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))[:2]
        template = load_template("mock_question", self._language)
        fallbacks = load_template("fallback_questions", self._language).splitlines()
        lines = [template.format(concept=concept) for concept, _ in top]
        while len(lines) < 2:
            lines.append(fallbacks[len(lines) % len(fallbacks)])
        return "\n".join(lines[:2])

    def _digest(self, request: ChatRequest) -> str:
        pieces = []
        for utterance in self._payload_utterances(request):
            speaker = str(utterance.get("speaker", "client")).capitalize()
            clause = _first_clause(str(utterance.get("text", "")))
            if clause:
                pieces.append(f"{speaker}: {clause}")
        return "; ".join(pieces) if pieces else "(empty transcript)"


class HttpChatProvider:
    def __init__(self, endpoint: str, timeout_s: float = 30.0) -> None:
        self.provider_id = f"http-chat:{endpoint}"
        self._endpoint = endpoint
        self._timeout_s = timeout_s

    def complete(self, request: ChatRequest) -> str:
        payload = {
            "system": request.system_prompt,
            "messages": [{"role": role, "text": text} for role, text in request.messages],
        }
        try:
            response = httpx.post(self._endpoint, json=payload, timeout=self._timeout_s)
            response.raise_for_status()
        except httpx.TimeoutException as exc:
            raise ProviderTimeoutError(f"chat provider timed out after {self._timeout_s}s") from exc
        except httpx.HTTPError as exc:
            raise ProviderTransportError(f"chat provider transport failure: {exc}") from exc
        try:
            reply = response.json()["reply"]
        except Exception as exc:
            raise MalformedReplyError("chat provider reply missing 'reply'") from exc
        if not isinstance(reply, str) or not reply:
            raise MalformedReplyError("chat provider returned an empty reply")
        return reply


def provider_call(
    provider: ChatProvider,
    request: ChatRequest,
    log: Optional[ExchangeLog] = None,
    retries: int = 1,
) -> str:
    """Call the provider with one retry, recording the exchange verbatim."""

    last_error: Exception | None = None
    for _ in range(retries + 1):
        started = time.perf_counter()
        try:
            reply = provider.complete(request)
        except Exception as exc:
            last_error = exc
            if log is not None:
                log.append(
                    ProviderExchange(
                        system_prompt=request.system_prompt,
                        messages=list(request.messages),
                        reply="",
                        latency_ms=(time.perf_counter() - started) * 1000.0,
                        provider_id=provider.provider_id,
                        failed=True,
                        error=str(exc),
                    )
                )
            continue
        if log is not None:
            log.append(
                ProviderExchange(
                    system_prompt=request.system_prompt,
                    messages=list(request.messages),
                    reply=reply,
                    latency_ms=(time.perf_counter() - started) * 1000.0,
                    provider_id=provider.provider_id,
                )
            )
        return reply
    raise last_error  # type: ignore[misc]


# --- speech pass-through clients -------------------------------------------


class TextToSpeechClient(Protocol):
    def synthesize(self, text: str) -> bytes: ...


class SpeechToTextClient(Protocol):
    def transcribe(self, audio: bytes) -> str: ...


class MockTextToSpeech:
    """Writes a silent WAV whose length tracks the text length."""

    def synthesize(self, text: str) -> bytes:
        frames = max(1, min(len(text), 400)) * 20
        buffer = io.BytesIO()
        with wave.open(buffer, "wb") as wav:
            wav.setnchannels(1)
            wav.setsampwidth(2)
            wav.setframerate(8000)
            wav.writeframes(b"\x00\x00" * frames)
        return buffer.getvalue()


class MockSpeechToText:
    """Decodes UTF-8 payloads as-is so offline tests can round-trip text."""

    def transcribe(self, audio: bytes) -> str:
        try:
            return audio.decode("utf-8")
        except UnicodeDecodeError:
            return "(unintelligible audio)"


class HttpTextToSpeech:
    def __init__(self, endpoint: str, timeout_s: float = 30.0) -> None:
        self._endpoint = endpoint
        self._timeout_s = timeout_s

    def synthesize(self, text: str) -> bytes:
        import base64

        try:
            response = httpx.post(self._endpoint, json={"text": text}, timeout=self._timeout_s)
            response.raise_for_status()
            return base64.b64decode(response.json()["audio"])
        except httpx.TimeoutException as exc:
            raise ProviderTimeoutError("tts provider timed out") from exc
        except httpx.HTTPError as exc:
            raise ProviderTransportError(f"tts provider transport failure: {exc}") from exc
        except (KeyError, ValueError) as exc:
            raise MalformedReplyError("tts provider reply missing 'audio'") from exc


class HttpSpeechToText:
    def __init__(self, endpoint: str, timeout_s: float = 30.0) -> None:
        self._endpoint = endpoint
        self._timeout_s = timeout_s

    def transcribe(self, audio: bytes) -> str:
        import base64

        payload = {"audio": base64.b64encode(audio).decode("ascii")}
        try:
            response = httpx.post(self._endpoint, json=payload, timeout=self._timeout_s)
            response.raise_for_status()
            return str(response.json()["text"])
        except httpx.TimeoutException as exc:
            raise ProviderTimeoutError("stt provider timed out") from exc
        except httpx.HTTPError as exc:
            raise ProviderTransportError(f"stt provider transport failure: {exc}") from exc
        except (KeyError, ValueError) as exc:
            raise MalformedReplyError("stt provider reply missing 'text'") from exc
