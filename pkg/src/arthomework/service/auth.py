"""Static-token authentication and role checks."""

from __future__ import annotations

from dataclasses import dataclass

from arthomework.errors import UnauthorizedError


@dataclass(frozen=True)
class Principal:
    role: str  # "client" | "therapist"
    id: str
    token: str


class TokenTable:
    def __init__(self, tokens: dict[str, dict]) -> None:
        self._by_token = {
            token: Principal(role=entry["role"], id=entry["id"], token=token)
            for token, entry in tokens.items()
        }

    def authenticate(self, token: str | None) -> Principal:
        if not token or token not in self._by_token:
            raise UnauthorizedError("unknown or missing token")
        return self._by_token[token]
