"""File-backed persistence: one JSON document per entity, PNGs by relative path.

Writes are crash-safe: content goes to a temp file in the same directory,
is fsynced, then renamed over the target (``_replace`` is the single rename
point so tests can inject a crash between the two steps). A document that
fails to parse is moved to ``quarantine/`` and reported as a structured
error instead of being half-read.
"""

from __future__ import annotations

import json
import os
import uuid
from pathlib import Path
from typing import Optional

from arthomework.errors import CorruptDocumentError, NotFoundError

_replace = os.replace  # patched by crash-injection tests


def canonical_json(payload: dict) -> str:
    return json.dumps(payload, ensure_ascii=False, sort_keys=True, indent=2) + "\n"


class DocumentStore:
    def __init__(self, root: Path | str) -> None:
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        self._quarantine = self.root / "quarantine"

    # -- JSON documents ------------------------------------------------

    def path_for(self, namespace: str, doc_id: str) -> Path:
        return self.root / namespace / f"{doc_id}.json"

    def save(self, namespace: str, doc_id: str, payload: dict) -> Path:
        path = self.path_for(namespace, doc_id)
        self._write_atomic(path, canonical_json(payload).encode("utf-8"))
        return path

    def save_new(self, namespace: str, doc_id: str, payload: dict) -> Path:
        """Like save, but refuses to overwrite (immutable snapshots)."""

        path = self.path_for(namespace, doc_id)
        if path.exists():
            raise FileExistsError(f"document already exists: {path}")
        return self.save(namespace, doc_id, payload)

    def load(self, namespace: str, doc_id: str) -> dict:
        path = self.path_for(namespace, doc_id)
        if not path.exists():
            raise NotFoundError(
                f"no {namespace} document {doc_id!r}", namespace=namespace, doc_id=doc_id
            )
        raw = path.read_bytes()
        try:
            payload = json.loads(raw.decode("utf-8"))
        except (UnicodeDecodeError, json.JSONDecodeError) as exc:
            quarantined = self._quarantine_file(path, namespace, doc_id)
            raise CorruptDocumentError(
                f"{namespace}/{doc_id} is corrupt and was quarantined",
                namespace=namespace,
                doc_id=doc_id,
                quarantined_to=str(quarantined),
            ) from exc
        if not isinstance(payload, dict):
            quarantined = self._quarantine_file(path, namespace, doc_id)
            raise CorruptDocumentError(
                f"{namespace}/{doc_id} root is not an object; quarantined",
                namespace=namespace,
                doc_id=doc_id,
                quarantined_to=str(quarantined),
            )
        return payload

    def exists(self, namespace: str, doc_id: str) -> bool:
        return self.path_for(namespace, doc_id).exists()

    def delete(self, namespace: str, doc_id: str) -> None:
        path = self.path_for(namespace, doc_id)
        if path.exists():
            path.unlink()

    def list_ids(self, namespace: str) -> list[str]:
        base = self.root / namespace
        if not base.is_dir():
            return []
        ids = [
            str(path.relative_to(base))[: -len(".json")]
            for path in base.rglob("*.json")
        ]
        return sorted(ids)

    # -- binary files (PNG, WAV) ----------------------------------------

    def file_path(self, ref: str) -> Path:
        path = (self.root / ref).resolve()
        if not str(path).startswith(str(self.root.resolve())):
            raise ValueError(f"ref escapes the data directory: {ref}")
        return path

    def save_bytes(self, ref: str, data: bytes) -> str:
        self._write_atomic(self.file_path(ref), data)
        return ref

    def load_bytes(self, ref: str) -> bytes:
        path = self.file_path(ref)
        if not path.exists():
            raise NotFoundError(f"no stored file {ref!r}", ref=ref)
        return path.read_bytes()

    def file_exists(self, ref: str) -> bool:
        return self.file_path(ref).exists()

    # -- internals -------------------------------------------------------

    def _write_atomic(self, path: Path, data: bytes) -> None:
        path.parent.mkdir(parents=True, exist_ok=True)
        tmp = path.parent / f".{path.name}.{uuid.uuid4().hex}.tmp"
        with open(tmp, "wb") as handle:
            handle.write(data)
            handle.flush()
            os.fsync(handle.fileno())
        try:
            _replace(tmp, path)
        except BaseException:
            tmp.unlink(missing_ok=True)
            raise

    def _quarantine_file(self, path: Path, namespace: str, doc_id: str) -> Optional[Path]:
        try:
            self._quarantine.mkdir(parents=True, exist_ok=True)
            flat = doc_id.replace("/", "__")
            target = self._quarantine / f"{namespace}__{flat}__{uuid.uuid4().hex}.json"
            _replace(path, target)
            return target
        except OSError:
            return None
