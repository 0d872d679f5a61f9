"""Therapist-facing customization profiles with copy-on-write versioning.

Every edit publishes a whole-profile snapshot under the next version
number; version documents are immutable once written, so any past session
can replay the exact profile it ran under. New clients start from the four
stock principles with an empty task and opening message.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from datetime import datetime
from typing import Callable, Optional

from arthomework.agents.principles import DialoguePrinciple, check_positions, default_principles
from arthomework.core.timeutil import from_iso, to_iso, utc_now
from arthomework.core.types import new_id
from arthomework.errors import (
    NotFoundError,
    PreconditionError,
    TextTooLongError,
    UnauthorizedError,
)
from arthomework.storage import DocumentStore

PROFILE_NAMESPACE = "profiles"
DEFAULT_TEXT_LIMIT_BYTES = 16 * 1024


@dataclass
class CustomizationProfile:
    profile_id: str
    client_id: str
    version: int
    principles: list[DialoguePrinciple]
    homework_task: str
    opening_message: str
    author: str
    created_at: datetime = field(default_factory=utc_now)

    def __post_init__(self) -> None:
        check_positions(self.principles)
        self.principles = sorted(self.principles, key=lambda p: p.position)

    def to_dict(self) -> dict:
        return {
            "profile_id": self.profile_id,
            "client_id": self.client_id,
            "version": self.version,
            "principles": [p.to_dict() for p in self.principles],
            "homework_task": self.homework_task,
            "opening_message": self.opening_message,
            "author": self.author,
            "created_at": to_iso(self.created_at),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "CustomizationProfile":
        return cls(
            profile_id=data["profile_id"],
            client_id=data["client_id"],
            version=int(data["version"]),
            principles=[DialoguePrinciple.from_dict(p) for p in data["principles"]],
            homework_task=data["homework_task"],
            opening_message=data["opening_message"],
            author=data["author"],
            created_at=from_iso(data["created_at"]),
        )


def _doc_id(client_id: str, version: int) -> str:
    return f"{client_id}/v{version:05d}"


class ProfileStore:
    def __init__(
        self,
        docs: DocumentStore,
        assigned_therapist: Callable[[str], str],
        text_limit_bytes: int = DEFAULT_TEXT_LIMIT_BYTES,
    ) -> None:
        self._docs = docs
        self._assigned_therapist = assigned_therapist
        self._text_limit = text_limit_bytes

    # -- reads -----------------------------------------------------------

    def latest_version(self, client_id: str) -> int:
        # scoped to the client's own directory; a flat scan goes quadratic
        versions = [
            int(doc_id[1:])
            for doc_id in self._docs.list_ids(f"{PROFILE_NAMESPACE}/{client_id}")
            if doc_id.startswith("v")
        ]
        return max(versions, default=0)

    def resolve(self, client_id: str, at_version: Optional[int] = None) -> CustomizationProfile:
        version = at_version if at_version is not None else self.latest_version(client_id)
        if version < 1:
            raise NotFoundError(f"client {client_id!r} has no profile", client_id=client_id)
        try:
            payload = self._docs.load(PROFILE_NAMESPACE, _doc_id(client_id, version))
        except NotFoundError:
            raise NotFoundError(
                f"client {client_id!r} has no profile version {version}",
                client_id=client_id,
                version=version,
            ) from None
        return CustomizationProfile.from_dict(payload)

    # -- writes ----------------------------------------------------------

    def ensure_default(self, client_id: str, author: str) -> CustomizationProfile:
        if self.latest_version(client_id) >= 1:
            return self.resolve(client_id)
        profile = CustomizationProfile(
            profile_id=f"prof-{client_id}",
            client_id=client_id,
            version=1,
            principles=default_principles(),
            homework_task="",
            opening_message="",
            author=author,
        )
        self._docs.save_new(PROFILE_NAMESPACE, _doc_id(client_id, 1), profile.to_dict())
        return profile

    def _authorize(self, client_id: str, therapist_id: str) -> None:
        assigned = self._assigned_therapist(client_id)
        if therapist_id != assigned:
            raise UnauthorizedError(
                f"therapist {therapist_id!r} is not assigned to client {client_id!r}",
                client_id=client_id,
                therapist_id=therapist_id,
            )

    def _check_length(self, text: str, label: str) -> None:
        if len(text.encode("utf-8")) > self._text_limit:
            raise TextTooLongError(
                f"{label} exceeds the {self._text_limit}-byte limit",
                limit_bytes=self._text_limit,
            )

    def _publish(
        self, client_id: str, therapist_id: str, **updates
    ) -> CustomizationProfile:
        self._authorize(client_id, therapist_id)
        base = self.ensure_default(client_id, therapist_id)
        profile = replace(
            base,
            version=base.version + 1,
            author=therapist_id,
            created_at=utc_now(),
            **updates,
        )
        self._docs.save_new(PROFILE_NAMESPACE, _doc_id(client_id, profile.version), profile.to_dict())
        return profile

    def upsert_principle(
        self,
        client_id: str,
        therapist_id: str,
        statement: str,
        example_questions: list[str],
        position: int,
        principle_id: Optional[str] = None,
    ) -> CustomizationProfile:
        """Insert a new principle at ``position`` or replace/move an existing one."""

        self._authorize(client_id, therapist_id)
        base = self.ensure_default(client_id, therapist_id)
        principles = [replace(p) for p in base.principles]

        existing = None
        if principle_id is not None:
            existing = next((p for p in principles if p.principle_id == principle_id), None)
            if existing is not None:
                principles.remove(existing)

        upper = len(principles) + 1
        if not 1 <= position <= upper:
            raise PreconditionError(
                f"position must be between 1 and {upper}", position=position
            )
        new_principle = DialoguePrinciple(
            principle_id=principle_id or new_id("prn"),
            statement=statement,
            example_questions=list(example_questions),
            position=position,
        )
        principles.insert(position - 1, new_principle)
        for index, principle in enumerate(principles):
            principle.position = index + 1
        return self._publish(client_id, therapist_id, principles=principles)

    def reorder_principles(
        self, client_id: str, therapist_id: str, permutation: list[int]
    ) -> CustomizationProfile:
        """``permutation[k]`` names the old position landing at new position k+1."""

        self._authorize(client_id, therapist_id)
        base = self.ensure_default(client_id, therapist_id)
        count = len(base.principles)
        if sorted(permutation) != list(range(1, count + 1)):
            raise PreconditionError(
                f"permutation must be a bijection on 1..{count}", permutation=permutation
            )
        by_position = {p.position: p for p in base.principles}
        reordered = []
        for new_position, old_position in enumerate(permutation, start=1):
            moved = replace(by_position[old_position], position=new_position)
            reordered.append(moved)
        return self._publish(client_id, therapist_id, principles=reordered)

    def set_homework_task(
        self, client_id: str, therapist_id: str, text: str
    ) -> CustomizationProfile:
        self._check_length(text, "homework task")
        return self._publish(client_id, therapist_id, homework_task=text)

    def set_opening_message(
        self, client_id: str, therapist_id: str, text: str
    ) -> CustomizationProfile:
        self._check_length(text, "opening message")
        return self._publish(client_id, therapist_id, opening_message=text)
