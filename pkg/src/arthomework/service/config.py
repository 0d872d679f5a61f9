"""Service configuration.

Providers are either the literal string "mock" (in-process deterministic
implementations; the whole suite runs offline) or an HTTP endpoint URL.
Auth is a static token table, which is all a small single-practice deployment needs.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path


@dataclass
class ApiConfig:
    data_dir: Path
    bind_host: str = "127.0.0.1"
    bind_port: int = 8866
    chat_provider: str = "mock"
    image_provider: str = "mock"
    tts_provider: str = "mock"
    stt_provider: str = "mock"
    queue_capacity: int = 64
    worker_count: int = 2
    session_timeout_minutes: int = 60
    language: str = "en"
    timezone: str = "UTC"
    canvas_width: int = 512
    canvas_height: int = 512
    provider_timeout_s: float = 30.0
    generation_prompt_mode: str = "rules"  # "rules" (reference) or "llm"
    summary_word_limit: int = 120
    text_limit_bytes: int = 16 * 1024
    shutdown_drain_timeout_s: float = 10.0
    # token -> {"role": "client"|"therapist", "id": ...}
    tokens: dict[str, dict] = field(default_factory=dict)
    # {"therapists": [{"id", "name"}], "clients": [{"id", "name", "therapist_id"}]}
    provision: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        self.data_dir = Path(self.data_dir)
        if self.worker_count < 1:
            raise ValueError("worker_count must be >= 1")
        if self.queue_capacity < 1:
            raise ValueError("queue_capacity must be >= 1")
        if self.generation_prompt_mode not in ("rules", "llm"):
            raise ValueError("generation_prompt_mode must be 'rules' or 'llm'")
        for token, principal in self.tokens.items():
            if principal.get("role") not in ("client", "therapist") or "id" not in principal:
                raise ValueError(f"malformed token entry for {token!r}")

    def check_data_dir_writable(self) -> None:
        self.data_dir.mkdir(parents=True, exist_ok=True)
        probe = self.data_dir / ".write-probe"
        try:
            probe.write_bytes(b"ok")
            probe.unlink()
        except OSError as exc:
            raise PermissionError(f"data directory not writable: {self.data_dir}") from exc

    @classmethod
    def from_dict(cls, data: dict) -> "ApiConfig":
        known = {f for f in cls.__dataclass_fields__}  # type: ignore[attr-defined]
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)

    @classmethod
    def from_file(cls, path: Path | str) -> "ApiConfig":
        return cls.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))
