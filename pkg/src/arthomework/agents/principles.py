"""Dialogue principles: the ordered rules a discussion agent works through."""

from __future__ import annotations

from dataclasses import dataclass, field

from arthomework.core.types import new_id


@dataclass
class DialoguePrinciple:
    principle_id: str
    statement: str
    example_questions: list[str]
    position: int

    def __post_init__(self) -> None:
        if not self.example_questions:
            raise ValueError("a principle needs at least one example question")
        if self.position < 1:
            raise ValueError("positions are 1-based")

    def to_dict(self) -> dict:
        return {
            "principle_id": self.principle_id,
            "statement": self.statement,
            "example_questions": list(self.example_questions),
            "position": self.position,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "DialoguePrinciple":
        return cls(
            principle_id=data["principle_id"],
            statement=data["statement"],
            example_questions=list(data["example_questions"]),
            position=int(data["position"]),
        )


def check_positions(principles: list[DialoguePrinciple]) -> None:
    """Positions must form a contiguous 1..N sequence."""

    positions = sorted(p.position for p in principles)
    if positions != list(range(1, len(principles) + 1)):
        raise ValueError(f"principle positions must be 1..{len(principles)}, got {positions}")


def default_principles() -> list[DialoguePrinciple]:
    """The four stock principles every new customization profile starts from."""

    entries = [
        (
            "Invite the client to notice how they feel about what they created.",
            "How are you feeling about what you are creating in this moment?",
        ),
        (
            "Explore what the artwork represents to the client personally.",
            "Can you share with me what this artwork represents to you personally?",
        ),
        (
            "Surface the emotions connected to the artwork.",
            "When you think about the emotions connected to this drawing, what comes up for you?",
        ),
        (
            "Connect those feelings to the client's daily life.",
            "How do you connect these feelings to your experiences in your daily life?",
        ),
    ]
    return [
        DialoguePrinciple(
            principle_id=new_id("prn"),
            statement=statement,
            example_questions=[question],
            position=index + 1,
        )
        for index, (statement, question) in enumerate(entries)
    ]
