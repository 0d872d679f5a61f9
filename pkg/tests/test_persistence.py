"""Document store: atomic writes, quarantine, crash injection."""

from __future__ import annotations

import json
import os
import random
import signal
import subprocess
import sys
import textwrap
import time

import pytest

import arthomework.storage as storage_module
from arthomework.errors import CorruptDocumentError, NotFoundError
from arthomework.storage import DocumentStore
from tests.conftest import make_session


@pytest.fixture
def docs(tmp_path):
    return DocumentStore(tmp_path / "data")


class TestRoundTrip:
    def test_session_document_round_trips_byte_equal(self, docs):
        session = make_session()
        docs.save("sessions", session.session_id, session.to_dict())
        loaded = docs.load("sessions", session.session_id)
        assert loaded == session.to_dict()
        # byte-equal on re-save: canonical serialization is stable
        path = docs.path_for("sessions", session.session_id)
        first = path.read_bytes()
        docs.save("sessions", session.session_id, loaded)
        assert path.read_bytes() == first

    def test_missing_document(self, docs):
        with pytest.raises(NotFoundError):
            docs.load("sessions", "nope")

    def test_list_ids_sorted(self, docs):
        for name in ("b", "a", "c"):
            docs.save("things", name, {"name": name})
        assert docs.list_ids("things") == ["a", "b", "c"]

    def test_bytes_round_trip(self, docs):
        ref = docs.save_bytes("images/x/y.png", b"\x89PNG fake")
        assert docs.load_bytes(ref) == b"\x89PNG fake"

    def test_ref_escaping_the_data_dir_rejected(self, docs):
        with pytest.raises(ValueError):
            docs.save_bytes("../outside.png", b"nope")


class TestQuarantine:
    def test_truncated_json_is_quarantined(self, docs, tmp_path):
        docs.save("sessions", "s1", {"ok": True})
        path = docs.path_for("sessions", "s1")
        path.write_bytes(path.read_bytes()[:10])
        with pytest.raises(CorruptDocumentError) as excinfo:
            docs.load("sessions", "s1")
        assert not path.exists()
        quarantined = list((tmp_path / "data" / "quarantine").iterdir())
        assert len(quarantined) == 1
        assert excinfo.value.details["quarantined_to"] == str(quarantined[0])

    def test_non_object_root_is_quarantined(self, docs):
        path = docs.path_for("sessions", "s2")
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text("[1, 2, 3]")
        with pytest.raises(CorruptDocumentError):
            docs.load("sessions", "s2")


class CrashBetweenWriteAndRename(RuntimeError):
    pass


class TestCrashInjection:
    def test_injected_kill_between_temp_write_and_rename_50_trials(
        self, docs, monkeypatch
    ):
        rng = random.Random(1234)
        real_replace = os.replace
        for trial in range(50):
            doc_id = f"doc-{trial}"
            v1 = {"version": 1, "payload": rng.random()}
            docs.save("trials", doc_id, v1)

            def crash(src, dst):
                os.unlink(src)  # the temp file dies with the process
                raise CrashBetweenWriteAndRename()

            monkeypatch.setattr(storage_module, "_replace", crash)
            with pytest.raises(CrashBetweenWriteAndRename):
                docs.save("trials", doc_id, {"version": 2, "payload": rng.random()})
            monkeypatch.setattr(storage_module, "_replace", real_replace)

            assert docs.load("trials", doc_id) == v1  # previous version intact

    def test_crash_before_any_version_leaves_no_document(self, docs, monkeypatch):
        def crash(src, dst):
            raise CrashBetweenWriteAndRename()

        monkeypatch.setattr(storage_module, "_replace", crash)
        with pytest.raises(CrashBetweenWriteAndRename):
            docs.save("trials", "fresh", {"v": 1})
        monkeypatch.setattr(storage_module, "_replace", os.replace)
        with pytest.raises(NotFoundError):
            docs.load("trials", "fresh")
        # stray temp files are not visible as documents
        assert docs.list_ids("trials") == []

    def test_sigkill_mid_write_leaves_previous_version_loadable(self, tmp_path):
        """One real process kill: a child writes larger and larger documents in
        a loop; killing it mid-flight must never corrupt the loadable state."""

        data_dir = tmp_path / "killdata"
        script = textwrap.dedent(
            f"""
            import itertools
            from arthomework.storage import DocumentStore
            docs = DocumentStore({str(data_dir)!r})
            docs.save("kill", "victim", {{"generation": 0}})
            print("ready", flush=True)
            for generation in itertools.count(1):
                docs.save("kill", "victim", {{"generation": generation, "pad": "x" * 50000}})
            """
        )
        child = subprocess.Popen(
            [sys.executable, "-c", script], stdout=subprocess.PIPE, text=True
        )
        try:
            assert child.stdout.readline().strip() == "ready"
            time.sleep(0.2)
        finally:
            child.send_signal(signal.SIGKILL)
            child.wait(timeout=10)

        docs = DocumentStore(data_dir)
        loaded = docs.load("kill", "victim")
        assert isinstance(loaded["generation"], int)  # parses: some complete version
