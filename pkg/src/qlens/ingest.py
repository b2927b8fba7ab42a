"""Reconstruct problem-solving sessions from raw mouse-event logs.

Pipeline: parse ndjson events, hit-test against manifest ROIs, pair
down/up events into drags, replay drags into intermediate answers.
"""

from __future__ import annotations

import json
import math
from bisect import bisect_right
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional, Union

from .answers import Answer, empty_answer
from .errors import EmptyInput, UnknownQuestion
from .manifest import ROLE_SLOT, ROLE_SOURCE, QuestionManifest, RoiBox

EVENT_KINDS = ("down", "up", "move")


@dataclass(frozen=True)
class RawEvent:
    """One mouse event as logged by the question player."""

    session: str
    student: str
    question: str
    grade: int
    t: int  # session-relative milliseconds after parsing
    x: int
    y: int
    kind: str


@dataclass(frozen=True)
class DragAction:
    """A down/up pair whose endpoints both landed in ROIs."""

    from_roi: int
    to_roi: int
    t_down: int
    t_up: int
    path_len_px: float


@dataclass(frozen=True)
class Step:
    """One answer-changing action within a session."""

    index: int
    answer: Answer
    time_elapse_ms: int
    traj_len_px: float


@dataclass(frozen=True)
class Session:
    session_id: str
    student_id: str
    question_id: str
    grade: int
    steps: tuple[Step, ...]
    total_time_ms: int
    total_traj_px: float
    final_answer: Answer


@dataclass
class IngestDiagnostics:
    """Tallies of everything the pipeline had to drop or ignore."""

    lines_total: int = 0
    lines_skipped: int = 0
    drags_dropped: int = 0
    noop_drags: int = 0
    sessions_skipped: int = 0
    malformed: list = field(default_factory=list)  # (line_no, reason)

    def note_malformed(self, line_no: int, reason: str) -> None:
        self.lines_skipped += 1
        self.malformed.append((line_no, reason))

    def to_dict(self) -> dict:
        return {
            "lines_total": self.lines_total,
            "lines_skipped": self.lines_skipped,
            "drags_dropped": self.drags_dropped,
            "noop_drags": self.noop_drags,
            "sessions_skipped": self.sessions_skipped,
        }


_REQUIRED_FIELDS = ("session", "student", "question", "grade", "t", "x", "y", "kind")


def _check_event(record: dict) -> Optional[str]:
    """Return a reason string if the record is malformed, else None."""
    for name in _REQUIRED_FIELDS:
        if name not in record:
            return f"missing field {name!r}"
    if record["kind"] not in EVENT_KINDS:
        return f"unknown kind {record['kind']!r}"
    for name in ("grade", "t", "x", "y"):
        value = record[name]
        if isinstance(value, bool) or not isinstance(value, int):
            return f"field {name!r} must be an integer"
    return None


def parse_events(
    source: Union[str, Path, bytes, Iterable[str]],
    diagnostics: Optional[IngestDiagnostics] = None,
) -> dict[str, list[RawEvent]]:
    """Parse line-delimited JSON events, grouped by session and t-sorted.

    Malformed lines are skipped and tallied; timestamps are rebased so
    each session starts at t=0. Raises EmptyInput if nothing parses.
    """
    diag = diagnostics if diagnostics is not None else IngestDiagnostics()
    if isinstance(source, Path):
        lines = source.read_text(encoding="utf-8").splitlines()
    elif isinstance(source, bytes):
        lines = source.decode("utf-8").splitlines()
    elif isinstance(source, str):
        lines = source.splitlines()
    else:
        lines = [line.rstrip("\n") for line in source]

    groups: dict[str, list[RawEvent]] = {}
    for line_no, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        diag.lines_total += 1
        try:
            record = json.loads(line)
        except json.JSONDecodeError as exc:
            diag.note_malformed(line_no, f"invalid JSON: {exc.msg}")
            continue
        if not isinstance(record, dict):
            diag.note_malformed(line_no, "record is not an object")
            continue
        reason = _check_event(record)
        if reason is not None:
            diag.note_malformed(line_no, reason)
            continue
        event = RawEvent(
            session=str(record["session"]),
            student=str(record["student"]),
            question=str(record["question"]),
            grade=record["grade"],
            t=record["t"],
            x=record["x"],
            y=record["y"],
            kind=record["kind"],
        )
        groups.setdefault(event.session, []).append(event)

    if not groups:
        raise EmptyInput("no events parsed from input")

    for session_id, events in groups.items():
        events.sort(key=lambda e: e.t)
        base = events[0].t
        if base:
            groups[session_id] = [
                RawEvent(e.session, e.student, e.question, e.grade, e.t - base, e.x, e.y, e.kind)
                for e in events
            ]
    return groups


def hit_test(x: int, y: int, rois: Iterable[RoiBox]) -> int:
    """Return the id of the ROI containing (x, y), edges inclusive, else 0."""
    for roi in rois:
        if roi.contains(x, y):
            return roi.roi_id
    return 0


def _move_prefix(events: list[RawEvent]) -> tuple[list[int], list[float]]:
    """Cumulative polyline length over the session's move events.

    prefix[k] = path length over the first k+1 moves; paired with the
    move timestamps for bisect lookups.
    """
    times: list[int] = []
    prefix: list[float] = []
    total = 0.0
    prev = None
    for e in events:
        if e.kind != "move":
            continue
        if prev is not None:
            total += math.hypot(e.x - prev.x, e.y - prev.y)
        times.append(e.t)
        prefix.append(total)
        prev = e
    return times, prefix


def _traj_at(times: list[int], prefix: list[float], t: int) -> float:
    """Cumulative move path length at time t (inclusive)."""
    i = bisect_right(times, t)
    return prefix[i - 1] if i else 0.0


def pair_drags(
    events: list[RawEvent],
    rois: Iterable[RoiBox],
    diagnostics: Optional[IngestDiagnostics] = None,
) -> list[DragAction]:
    """Pair each down with the next up; keep pairs with both ends in ROIs.

    A second down before an up replaces the pending one; replaced or
    unmatched endpoints and non-ROI pairs count as dropped drags.
    """
    diag = diagnostics if diagnostics is not None else IngestDiagnostics()
    roi_list = list(rois)
    times, prefix = _move_prefix(events)
    drags: list[DragAction] = []
    pending: Optional[RawEvent] = None
    for e in events:
        if e.kind == "down":
            if pending is not None:
                diag.drags_dropped += 1
            pending = e
        elif e.kind == "up":
            if pending is None:
                diag.drags_dropped += 1
                continue
            from_roi = hit_test(pending.x, pending.y, roi_list)
            to_roi = hit_test(e.x, e.y, roi_list)
            if from_roi == 0 or to_roi == 0:
                diag.drags_dropped += 1
            else:
                lo = bisect_right(times, pending.t - 1)
                hi = bisect_right(times, e.t) - 1
                path = prefix[hi] - prefix[lo] if hi > lo else 0.0
                drags.append(DragAction(from_roi, to_roi, pending.t, e.t, path))
            pending = None
    if pending is not None:
        diag.drags_dropped += 1
    return drags


def apply_drag(answer: Answer, drag: DragAction, manifest: QuestionManifest) -> Answer:
    """Replay one drag against an intermediate answer.

    source->slot inserts (displacing any occupant to the pool),
    slot->slot moves or exchanges, slot->source removes. Anything else,
    or a drag that reproduces the same answer, returns the input.
    """
    src = manifest.roi(drag.from_roi)
    dst = manifest.roi(drag.to_roi)
    slots = list(answer)

    if src.role == ROLE_SOURCE and dst.role == ROLE_SLOT:
        element = src.element_id
        if element in answer and answer[dst.slot_index - 1] != element:
            return answer  # element already placed, source region is empty
        slots[dst.slot_index - 1] = element
    elif src.role == ROLE_SLOT and dst.role == ROLE_SLOT:
        moving = slots[src.slot_index - 1]
        if moving is None:
            return answer
        slots[src.slot_index - 1] = slots[dst.slot_index - 1]
        slots[dst.slot_index - 1] = moving
    elif src.role == ROLE_SLOT and dst.role == ROLE_SOURCE:
        slots[src.slot_index - 1] = None
    else:
        return answer

    result = tuple(slots)
    return answer if result == answer else result


def build_session(
    events: list[RawEvent],
    manifest: QuestionManifest,
    diagnostics: Optional[IngestDiagnostics] = None,
) -> Session:
    """Fold one session's events into steps of changing answers."""
    if manifest is None:
        raise UnknownQuestion("no manifest for session events")
    diag = diagnostics if diagnostics is not None else IngestDiagnostics()
    if not events:
        return Session(
            session_id="",
            student_id="",
            question_id=manifest.question_id,
            grade=0,
            steps=(),
            total_time_ms=0,
            total_traj_px=0.0,
            final_answer=empty_answer(manifest.slot_count),
        )
    events = sorted(events, key=lambda e: e.t)
    first = events[0]
    if first.question != manifest.question_id:
        raise UnknownQuestion(
            f"events are for question {first.question!r}, manifest is {manifest.question_id!r}"
        )
    base = first.t
    if base:
        events = [
            RawEvent(e.session, e.student, e.question, e.grade, e.t - base, e.x, e.y, e.kind)
            for e in events
        ]

    times, prefix = _move_prefix(events)
    drags = pair_drags(events, manifest.rois, diag)
    answer = empty_answer(manifest.slot_count)
    steps: list[Step] = []
    for drag in drags:
        changed = apply_drag(answer, drag, manifest)
        if changed == answer:
            diag.noop_drags += 1
            continue
        answer = changed
        steps.append(
            Step(
                index=len(steps) + 1,
                answer=answer,
                time_elapse_ms=drag.t_up,
                traj_len_px=_traj_at(times, prefix, drag.t_up),
            )
        )
    return Session(
        session_id=first.session,
        student_id=first.student,
        question_id=first.question,
        grade=first.grade,
        steps=tuple(steps),
        total_time_ms=events[-1].t,
        total_traj_px=prefix[-1] if prefix else 0.0,
        final_answer=answer,
    )


def sessions_from_log(
    source,
    manifest: QuestionManifest,
    diagnostics: Optional[IngestDiagnostics] = None,
) -> list[Session]:
    """Parse a log and build every session that targets the manifest's question.

    Sessions for other questions are skipped and tallied. Session order
    follows sorted session ids for reproducibility.
    """
    diag = diagnostics if diagnostics is not None else IngestDiagnostics()
    groups = parse_events(source, diag)
    sessions: list[Session] = []
    for session_id in sorted(groups):
        events = groups[session_id]
        if events[0].question != manifest.question_id:
            diag.sessions_skipped += 1
            continue
        sessions.append(build_session(events, manifest, diag))
    return sessions
