"""Intermediate answers: fixed-length slot vectors of element ids.

An answer is a plain tuple so it can key dicts and sets (the level-2
transition graph is a multigraph over answers). ``None`` marks an empty
slot. A non-null element id appears at most once per answer.
"""

from __future__ import annotations

from typing import Optional

Answer = tuple[Optional[int], ...]


def empty_answer(slot_count: int) -> Answer:
    return (None,) * slot_count


def answer_key(answer: Answer) -> tuple[int, ...]:
    """Sort key for lexicographic tie-breaks; empty slots sort first."""
    return tuple(-1 if v is None else v for v in answer)


def answer_to_list(answer: Answer) -> list[Optional[int]]:
    return list(answer)


def answer_from_list(values: list, slot_count: int | None = None) -> Answer:
    """Validate and convert a JSON-style list into an answer tuple."""
    answer = tuple(values)
    if slot_count is not None and len(answer) != slot_count:
        raise ValueError(f"answer has {len(answer)} slots, expected {slot_count}")
    placed = [v for v in answer if v is not None]
    for v in placed:
        if not isinstance(v, int) or isinstance(v, bool):
            raise ValueError(f"slot value must be an element id or null, got {v!r}")
    if len(placed) != len(set(placed)):
        raise ValueError(f"element placed in more than one slot: {values!r}")
    return answer
