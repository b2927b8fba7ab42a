"""Shared fixtures: the six-slot ordering question and event builders.

The manifest mirrors the worked example used throughout the golden
tests: six numbered elements dragged into six slots, correct order
(6,3,1,5,4,2), one per-slot placement condition.
"""

from __future__ import annotations

import json

import pytest

from qlens.ingest import RawEvent
from qlens.manifest import QuestionManifest, load_manifest

# source ROI for element e is roi 6+e; slot ROI for slot s is roi s
WORKED_PAIRS = [(12, 1), (11, 4), (10, 2), (9, 3), (8, 5), (7, 6)]

# verdict lines collected by the acceptance tests, echoed after capture ends
ACCEPTANCE_VERDICTS: list[str] = []


def pytest_terminal_summary(terminalreporter) -> None:
    if ACCEPTANCE_VERDICTS:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_VERDICTS:
            terminalreporter.write_line(line)

WORKED_ANSWERS = [
    (6, None, None, None, None, None),
    (6, None, None, 5, None, None),
    (6, 4, None, 5, None, None),
    (6, 4, 3, 5, None, None),
    (6, 4, 3, 5, 2, None),
    (6, 4, 3, 5, 2, 1),
]


def fig_manifest_dict() -> dict:
    rois = []
    for i in range(6):
        rois.append(
            {
                "id": i + 1,
                "x0": 40 + 80 * i,
                "y0": 100,
                "x1": 100 + 80 * i,
                "y1": 160,
                "role": "slot",
                "slot": i + 1,
            }
        )
    for i in range(6):
        rois.append(
            {
                "id": i + 7,
                "x0": 40 + 80 * i,
                "y0": 300,
                "x1": 100 + 80 * i,
                "y1": 360,
                "role": "source",
                "element": i + 1,
            }
        )
    rois.append({"id": 13, "x0": 40, "y0": 500, "x1": 100, "y1": 560, "role": "inert"})
    return {
        "schema": "qlens-manifest/1",
        "question": "q-order",
        "title": "Order the six numbers",
        "slot_count": 6,
        "elements": [{"id": i, "value": i, "label": str(i)} for i in range(1, 7)],
        "rois": rois,
        "correct_answer": [6, 3, 1, 5, 4, 2],
        "conditions": [
            {"id": i, "kind": "absolute", "expr": f"slot({i}) = correct", "label": f"slot {i}"}
            for i in range(1, 7)
        ],
        "solution_steps": None,
    }


@pytest.fixture
def fig_manifest() -> QuestionManifest:
    return load_manifest(fig_manifest_dict())


def drag_events(
    manifest: QuestionManifest,
    pairs: list,
    session: str = "s1",
    student: str = "u1",
    grade: int = 2,
    question: str | None = None,
    spacing_ms: int = 1000,
    tail_ms: int = 0,
) -> list[RawEvent]:
    """down/move/move/up events between ROI centers, one block per drag."""
    question = question or manifest.question_id
    events = []
    t = spacing_ms
    for src_id, dst_id in pairs:
        sx, sy = manifest.roi(src_id).center()
        dx, dy = manifest.roi(dst_id).center()
        events.append(RawEvent(session, student, question, grade, t, sx, sy, "down"))
        events.append(
            RawEvent(session, student, question, grade, t + 20, (sx + dx) // 2, (sy + dy) // 2, "move")
        )
        events.append(RawEvent(session, student, question, grade, t + 40, dx, dy, "move"))
        events.append(RawEvent(session, student, question, grade, t + 60, dx, dy, "up"))
        t += spacing_ms
    if tail_ms:
        last = events[-1]
        events.append(
            RawEvent(session, student, question, grade, last.t + tail_ms, last.x, last.y, "move")
        )
    return events


def worked_session_events(manifest: QuestionManifest, **kwargs) -> list[RawEvent]:
    return drag_events(manifest, WORKED_PAIRS, **kwargs)


def session_from_pairs(manifest: QuestionManifest, pairs: list, **kwargs):
    """Build one Session straight from ROI drag pairs."""
    from qlens.ingest import build_session

    return build_session(drag_events(manifest, pairs, **kwargs), manifest)


def events_to_lines(events: list[RawEvent]) -> str:
    """The ndjson wire form of a list of events."""
    return "\n".join(
        json.dumps(
            {
                "session": e.session,
                "student": e.student,
                "question": e.question,
                "grade": e.grade,
                "t": e.t,
                "x": e.x,
                "y": e.y,
                "kind": e.kind,
            }
        )
        for e in events
    ) + "\n"
