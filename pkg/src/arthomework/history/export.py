"""Lossless export/import of a client's homework history as a zip archive.

Layout (manifest schema_version 1):
    manifest.json
    sessions/<session_id>.json
    sessions/<artwork_id>.segments.json
    images/<relative ref as stored>
"""

from __future__ import annotations

import json
import zipfile
from pathlib import Path

from arthomework.core.timeutil import to_iso, utc_now
from arthomework.core.types import HomeworkSession
from arthomework.errors import DanglingRefError, NotFoundError
from arthomework.history.records import SEGMENT_NAMESPACE
from arthomework.storage import DocumentStore, canonical_json

MANIFEST_SCHEMA_VERSION = 1
SESSION_NAMESPACE = "sessions"


def _image_refs(session: HomeworkSession) -> list[str]:
    refs: list[str] = []
    for artwork in session.artworks:
        refs.append(artwork.control_image_ref)
        refs.extend(artwork.process_frames)
        if artwork.generated_image_ref:
            refs.append(artwork.generated_image_ref)
    # preserve order, drop duplicates (frames are shared across regenerations)
    return list(dict.fromkeys(refs))


def export_history(docs: DocumentStore, client_id: str, out_path: Path | str) -> Path:
    out_path = Path(out_path)
    session_ids = [
        doc_id
        for doc_id in docs.list_ids(SESSION_NAMESPACE)
        if docs.load(SESSION_NAMESPACE, doc_id).get("client_id") == client_id
    ]
    if not session_ids:
        raise NotFoundError(f"client {client_id!r} has no stored sessions", client_id=client_id)

    manifest = {
        "schema_version": MANIFEST_SCHEMA_VERSION,
        "client_id": client_id,
        "exported_at": to_iso(utc_now()),
        "sessions": sorted(session_ids),
        "segments": [],
        "images": [],
    }

    out_path.parent.mkdir(parents=True, exist_ok=True)
    with zipfile.ZipFile(out_path, "w", compression=zipfile.ZIP_DEFLATED) as archive:
        for session_id in sorted(session_ids):
            payload = docs.load(SESSION_NAMESPACE, session_id)
            session = HomeworkSession.from_dict(payload)
            archive.writestr(f"sessions/{session_id}.json", canonical_json(payload))
            for artwork in session.artworks:
                if not docs.exists(SEGMENT_NAMESPACE, artwork.artwork_id):
                    raise DanglingRefError(
                        f"segment map missing: {artwork.segment_map_ref}",
                        ref=artwork.segment_map_ref,
                    )
                segments = docs.load(SEGMENT_NAMESPACE, artwork.artwork_id)
                archive.writestr(
                    f"sessions/{artwork.artwork_id}.segments.json", canonical_json(segments)
                )
                manifest["segments"].append(artwork.artwork_id)
            for ref in _image_refs(session):
                if not docs.file_exists(ref):
                    raise DanglingRefError(f"stored image missing: {ref}", ref=ref)
                archive.writestr(ref, docs.load_bytes(ref))
                manifest["images"].append(ref)
        archive.writestr("manifest.json", canonical_json(manifest))
    return out_path


def import_archive(archive_path: Path | str, docs: DocumentStore) -> dict:
    """Restore an exported archive into a data directory; returns the manifest."""

    with zipfile.ZipFile(archive_path) as archive:
        manifest = json.loads(archive.read("manifest.json").decode("utf-8"))
        if manifest.get("schema_version") != MANIFEST_SCHEMA_VERSION:
            raise ValueError(f"unsupported archive schema: {manifest.get('schema_version')}")
        for name in archive.namelist():
            if name == "manifest.json":
                continue
            data = archive.read(name)
            if name.startswith("sessions/") and name.endswith(".segments.json"):
                artwork_id = name[len("sessions/"):-len(".segments.json")]
                docs.save(SEGMENT_NAMESPACE, artwork_id, json.loads(data.decode("utf-8")))
            elif name.startswith("sessions/") and name.endswith(".json"):
                session_id = name[len("sessions/"):-len(".json")]
                docs.save(SESSION_NAMESPACE, session_id, json.loads(data.decode("utf-8")))
            elif name.startswith("images/"):
                docs.save_bytes(name, data)
    return manifest
