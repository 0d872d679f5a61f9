"""Asynchronous image-generation job queue.

Multi-producer (request handlers) / multi-consumer (a small worker pool);
FIFO among queued jobs. Status moves only queued -> running -> completed or
failed, enforced in one place (``_transition``) so every code path and the
model-checking tests share the same legality rule. Each transition is
persisted, which is what makes drain-or-restart shutdown safe: anything
still queued on disk is re-enqueued on startup.
"""

from __future__ import annotations

import queue
import threading
import time
from dataclasses import dataclass, replace
from datetime import datetime
from enum import Enum
from typing import Callable, Optional

from arthomework.canvas.providers import ImageProvider, ImageRequest
from arthomework.core.timeutil import from_iso, to_iso, utc_now
from arthomework.core.types import new_id
from arthomework.errors import (
    IllegalTransitionError,
    NotFoundError,
    ProviderError,
    ProviderTimeoutError,
    ProviderTransportError,
    QueueFullError,
)


class JobStatus(str, Enum):
    QUEUED = "queued"
    RUNNING = "running"
    COMPLETED = "completed"
    FAILED = "failed"


LEGAL_TRANSITIONS: dict[JobStatus, frozenset[JobStatus]] = {
    JobStatus.QUEUED: frozenset({JobStatus.RUNNING}),
    JobStatus.RUNNING: frozenset({JobStatus.COMPLETED, JobStatus.FAILED}),
    JobStatus.COMPLETED: frozenset(),
    JobStatus.FAILED: frozenset(),
}

TERMINAL_STATUSES = frozenset({JobStatus.COMPLETED, JobStatus.FAILED})

_TRANSIENT_ERRORS = (ProviderTimeoutError, ProviderTransportError)

_SENTINEL = object()


def can_transition(current: JobStatus, target: JobStatus) -> bool:
    return target in LEGAL_TRANSITIONS[current]


@dataclass
class GenerationJob:
    job_id: str
    artwork_id: str
    prompt: str
    control_image_ref: str
    style: str
    status: JobStatus
    enqueued_at: datetime
    finished_at: Optional[datetime] = None
    failure_reason: Optional[str] = None
    generated_image_ref: Optional[str] = None
    seed: Optional[int] = None

    def to_dict(self) -> dict:
        return {
            "job_id": self.job_id,
            "artwork_id": self.artwork_id,
            "prompt": self.prompt,
            "control_image_ref": self.control_image_ref,
            "style": self.style,
            "status": self.status.value,
            "enqueued_at": to_iso(self.enqueued_at),
            "finished_at": to_iso(self.finished_at) if self.finished_at else None,
            "failure_reason": self.failure_reason,
            "generated_image_ref": self.generated_image_ref,
            "seed": self.seed,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "GenerationJob":
        return cls(
            job_id=data["job_id"],
            artwork_id=data["artwork_id"],
            prompt=data["prompt"],
            control_image_ref=data["control_image_ref"],
            style=data["style"],
            status=JobStatus(data["status"]),
            enqueued_at=from_iso(data["enqueued_at"]),
            finished_at=from_iso(data["finished_at"]) if data.get("finished_at") else None,
            failure_reason=data.get("failure_reason"),
            generated_image_ref=data.get("generated_image_ref"),
            seed=data.get("seed"),
        )


class JobQueue:
    def __init__(
        self,
        provider: ImageProvider,
        image_sink: Callable[[str, bytes], str],
        capacity: int = 64,
        worker_count: int = 2,
        persist: Optional[Callable[[GenerationJob], None]] = None,
        on_completed: Optional[Callable[[GenerationJob], None]] = None,
        retries: int = 1,
    ) -> None:
        if capacity < 1 or worker_count < 1:
            raise ValueError("capacity and worker_count must be >= 1")
        self._provider = provider
        self._image_sink = image_sink
        self._persist = persist or (lambda job: None)
        self._on_completed = on_completed or (lambda job: None)
        self._retries = retries
        self._queue: queue.Queue = queue.Queue(maxsize=capacity)
        self._jobs: dict[str, GenerationJob] = {}
        self._payloads: dict[str, bytes] = {}
        self._lock = threading.Lock()
        self._active = 0
        self._closed = False
        self._threads = [
            threading.Thread(target=self._worker, name=f"generation-worker-{i}", daemon=True)
            for i in range(worker_count)
        ]
        self._started = False

    def start(self) -> None:
        if not self._started:
            self._started = True
            for thread in self._threads:
                thread.start()

    def enqueue(
        self,
        artwork_id: str,
        prompt: str,
        control_png: bytes,
        control_image_ref: str,
        style: str,
        seed: Optional[int] = None,
        job_id: Optional[str] = None,
    ) -> str:
        if not prompt:
            raise ValueError("prompt must be non-empty")
        job = GenerationJob(
            job_id=job_id or new_id("job"),
            artwork_id=artwork_id,
            prompt=prompt,
            control_image_ref=control_image_ref,
            style=style,
            status=JobStatus.QUEUED,
            enqueued_at=utc_now(),
            seed=seed,
        )
        with self._lock:
            if self._closed:
                raise QueueFullError("generation queue is shut down")
            try:
                self._queue.put_nowait(job.job_id)
            except queue.Full:
                raise QueueFullError(
                    f"generation queue is at capacity ({self._queue.maxsize})",
                    capacity=self._queue.maxsize,
                ) from None
            self._jobs[job.job_id] = job
            self._payloads[job.job_id] = control_png
            self._persist(job)
        return job.job_id

    def resume(self, job: GenerationJob, control_png: bytes) -> None:
        """Re-admit a persisted job after restart (queued or interrupted-running)."""

        if job.status in TERMINAL_STATUSES:
            return
        with self._lock:
            self._jobs[job.job_id] = job
            self._payloads[job.job_id] = control_png
            self._queue.put_nowait(job.job_id)

    def poll(self, job_id: str) -> GenerationJob:
        with self._lock:
            job = self._jobs.get(job_id)
            if job is None:
                raise NotFoundError(f"unknown job {job_id!r}", job_id=job_id)
            return replace(job)

    def pending_count(self) -> int:
        with self._lock:
            return sum(
                1 for job in self._jobs.values() if job.status not in TERMINAL_STATUSES
            )

    def _transition(self, job_id: str, target: JobStatus, **updates) -> GenerationJob:
        with self._lock:
            job = self._jobs[job_id]
            if not can_transition(job.status, target):
                raise IllegalTransitionError(
                    f"job {job_id}: {job.status.value} -> {target.value} is not allowed"
                )
            job = replace(job, status=target, **updates)
            self._jobs[job_id] = job
            self._persist(job)
            return replace(job)

    def _execute(self, job_id: str) -> None:
        with self._lock:
            job = self._jobs[job_id]
            payload = self._payloads.get(job_id, b"")
        if job.status is JobStatus.QUEUED:
            job = self._transition(job_id, JobStatus.RUNNING)
        request = ImageRequest(
            prompt=job.prompt, control_png=payload, style=job.style, seed=job.seed
        )
        attempt = 0
        while True:
            try:
                image = self._provider.generate(request)
                break
            except _TRANSIENT_ERRORS as exc:
                attempt += 1
                if attempt > self._retries:
                    self._fail(job_id, str(exc))
                    return
            except ProviderError as exc:
                self._fail(job_id, str(exc))
                return
        try:
            image_ref = self._image_sink(job.artwork_id, image)
            # Notify before flipping the status so that a poller who observes
            # "completed" can rely on the completion side effects being done.
            done = replace(
                job,
                status=JobStatus.COMPLETED,
                generated_image_ref=image_ref,
                finished_at=utc_now(),
            )
            self._on_completed(done)
        except Exception as exc:  # sink/callback failures are job failures
            self._fail(job_id, f"storing generated image failed: {exc}")
            return
        self._transition(
            job_id,
            JobStatus.COMPLETED,
            generated_image_ref=done.generated_image_ref,
            finished_at=done.finished_at,
        )
        self._payloads.pop(job_id, None)

    def _fail(self, job_id: str, reason: str) -> None:
        self._transition(job_id, JobStatus.FAILED, failure_reason=reason, finished_at=utc_now())
        self._payloads.pop(job_id, None)

    def _worker(self) -> None:
        while True:
            item = self._queue.get()
            if item is _SENTINEL:
                self._queue.task_done()
                return
            with self._lock:
                self._active += 1
            try:
                self._execute(item)
            except Exception:
                # A worker must survive anything; the job is marked failed when possible.
                try:
                    self._fail(item, "internal worker error")
                except IllegalTransitionError:
                    pass
            finally:
                with self._lock:
                    self._active -= 1
                self._queue.task_done()

    def shutdown(self, timeout_s: float = 10.0) -> bool:
        """Stop accepting work and drain. Returns True when fully drained.

        Jobs still queued at the deadline stay persisted as queued and are
        re-enqueued on the next start via ``resume``.
        """

        with self._lock:
            self._closed = True
        deadline = time.monotonic() + timeout_s
        while time.monotonic() < deadline:
            with self._lock:
                idle = self._queue.empty() and self._active == 0
            if idle:
                break
            time.sleep(0.01)
        for _ in self._threads:
            try:
                self._queue.put_nowait(_SENTINEL)
            except queue.Full:
                break
        for thread in self._threads:
            if thread.is_alive():
                thread.join(timeout=max(0.0, deadline - time.monotonic()) + 0.5)
        with self._lock:
            return self._active == 0 and all(
                job.status in TERMINAL_STATUSES for job in self._jobs.values()
            )
