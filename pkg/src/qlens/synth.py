"""Synthetic mouse-event corpora for load tests and demos.

Three behavior profiles: replaying the designer's solution, mostly
correct placement with occasional mistakes, and an aimless random walk.
Events are emitted raw so a generated log exercises the whole pipeline.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field
from typing import Optional

from .answers import Answer, empty_answer
from .errors import InvalidConfig
from .ingest import DragAction, apply_drag
from .manifest import QuestionManifest, RoiBox

STRATEGIES = ("solution", "greedy", "walk")
MIN_MOVE_INTERVAL_MS = 20  # player samples the cursor at <= 50 Hz


@dataclass
class SynthConfig:
    student_count: int = 50
    grades: dict = field(default_factory=lambda: {2: 0.5, 7: 0.5})  # grade -> weight
    mix: tuple = (0.3, 0.5, 0.2)  # solution, greedy, walk
    think_ms_mean: float = 2200.0
    think_ms_sd: float = 700.0
    seed: int = 0

    def validate(self) -> None:
        if self.student_count < 1:
            raise InvalidConfig(f"student_count must be >= 1, got {self.student_count}")
        if len(self.mix) != 3 or any(p < 0 for p in self.mix):
            raise InvalidConfig(f"mix must be three nonnegative weights, got {self.mix!r}")
        if not math.isclose(sum(self.mix), 1.0, abs_tol=1e-9):
            raise InvalidConfig(f"mix weights must sum to 1, got {sum(self.mix)}")
        if not self.grades or any(w <= 0 for w in self.grades.values()):
            raise InvalidConfig("grade distribution needs positive weights")
        if self.think_ms_mean <= 0 or self.think_ms_sd < 0:
            raise InvalidConfig("think-time parameters must be positive")


def _point_in(roi: RoiBox, rng: random.Random) -> tuple[int, int]:
    return rng.randint(roi.x0, roi.x1), rng.randint(roi.y0, roi.y1)


def _drag_between(a: Answer, b: Answer, manifest: QuestionManifest) -> Optional[tuple[int, int]]:
    """ROI pair for a single drag transforming a into b, if one exists."""
    changed = [i for i in range(len(a)) if a[i] != b[i]]
    if len(changed) == 1:
        i = changed[0]
        if a[i] is None:
            return manifest.source_roi(b[i]).roi_id, manifest.slot_roi(i + 1).roi_id
        if b[i] is None:
            return manifest.slot_roi(i + 1).roi_id, manifest.source_roi(a[i]).roi_id
        if b[i] not in a:
            return manifest.source_roi(b[i]).roi_id, manifest.slot_roi(i + 1).roi_id
        return None
    if len(changed) == 2:
        i, j = changed
        if a[i] == b[j] and a[j] == b[i] and a[i] is not None:
            return manifest.slot_roi(i + 1).roi_id, manifest.slot_roi(j + 1).roi_id
        if a[i] == b[j] and a[i] is not None and a[j] is None and b[i] is None:
            return manifest.slot_roi(i + 1).roi_id, manifest.slot_roi(j + 1).roi_id
        if a[j] == b[i] and a[j] is not None and a[i] is None and b[j] is None:
            return manifest.slot_roi(j + 1).roi_id, manifest.slot_roi(i + 1).roi_id
    return None


def _solution_drags(manifest: QuestionManifest) -> list[tuple[int, int]]:
    """Drags replaying solution_steps, else correct fill in slot order."""
    if manifest.solution_steps:
        drags = []
        prev = empty_answer(manifest.slot_count)
        for step in manifest.solution_steps:
            pair = _drag_between(prev, step, manifest)
            if pair is None:
                drags = None
                break
            drags.append(pair)
            prev = step
        if drags is not None and prev == manifest.correct_answer:
            return drags
    return [
        (manifest.source_roi(manifest.correct_answer[i]).roi_id, manifest.slot_roi(i + 1).roi_id)
        for i in range(manifest.slot_count)
    ]


def _greedy_drags(manifest: QuestionManifest, rng: random.Random) -> list[tuple[int, int]]:
    """Mostly correct placements with a one-in-five chance of a mistake."""
    correct = manifest.correct_answer
    answer = empty_answer(manifest.slot_count)
    drags: list[tuple[int, int]] = []
    budget = 3 * manifest.slot_count
    while answer != correct and budget > 0:
        budget -= 1
        pair = None
        if rng.random() < 0.8:
            fixable = [i for i in range(len(answer)) if answer[i] != correct[i]]
            slot = rng.choice(fixable)
            element = correct[slot]
            if element in answer:
                pair = (
                    manifest.slot_roi(answer.index(element) + 1).roi_id,
                    manifest.slot_roi(slot + 1).roi_id,
                )
            else:
                pair = (manifest.source_roi(element).roi_id, manifest.slot_roi(slot + 1).roi_id)
        else:
            pair = _random_change(answer, manifest, rng)
        if pair is None:
            continue
        answer = _apply_pair(answer, pair, manifest)
        drags.append(pair)
    return drags


def _random_change(
    answer: Answer, manifest: QuestionManifest, rng: random.Random
) -> Optional[tuple[int, int]]:
    """One answer-changing ROI pair chosen at random."""
    pool = [e.element_id for e in manifest.elements if e.element_id not in answer]
    occupied = [i for i, v in enumerate(answer) if v is not None]
    choices = []
    if pool:
        choices.append("insert")
    if occupied and len(answer) > 1:
        choices.append("move")
    if occupied:
        choices.append("remove")
    if not choices:
        return None
    action = rng.choice(choices)
    if action == "insert":
        element = rng.choice(pool)
        slot = rng.randrange(len(answer)) + 1
        return manifest.source_roi(element).roi_id, manifest.slot_roi(slot).roi_id
    if action == "move":
        src = rng.choice(occupied) + 1
        dst = rng.choice([i + 1 for i in range(len(answer)) if i + 1 != src])
        return manifest.slot_roi(src).roi_id, manifest.slot_roi(dst).roi_id
    slot = rng.choice(occupied)
    return manifest.slot_roi(slot + 1).roi_id, manifest.source_roi(answer[slot]).roi_id


def _walk_drags(manifest: QuestionManifest, rng: random.Random) -> list[tuple[int, int]]:
    answer = empty_answer(manifest.slot_count)
    drags = []
    for _ in range(rng.randint(2, 2 * manifest.slot_count + 2)):
        pair = _random_change(answer, manifest, rng)
        if pair is None:
            break
        answer = _apply_pair(answer, pair, manifest)
        drags.append(pair)
    return drags


def _apply_pair(answer: Answer, pair: tuple[int, int], manifest: QuestionManifest) -> Answer:
    return apply_drag(answer, DragAction(pair[0], pair[1], 0, 0, 0.0), manifest)


class _EventWriter:
    """Accumulates one session's events with monotone timestamps."""

    def __init__(self, session_id: str, student_id: str, question_id: str, grade: int):
        self.head = {
            "session": session_id,
            "student": student_id,
            "question": question_id,
            "grade": grade,
        }
        self.t = 0
        self.events: list[dict] = []

    def emit(self, kind: str, x: int, y: int, dt: int) -> None:
        self.t += max(1, dt)
        self.events.append({**self.head, "t": self.t, "x": x, "y": y, "kind": kind})


def _emit_drag(
    writer: _EventWriter,
    src: RoiBox,
    dst: RoiBox,
    rng: random.Random,
    config: SynthConfig,
) -> None:
    think = max(300, int(rng.gauss(config.think_ms_mean, config.think_ms_sd)))
    x0, y0 = _point_in(src, rng)
    x1, y1 = _point_in(dst, rng)
    writer.emit("down", x0, y0, think)
    hops = rng.randint(3, 8)
    for k in range(1, hops + 1):
        frac = k / (hops + 1)
        writer.emit(
            "move",
            round(x0 + (x1 - x0) * frac) + rng.randint(-3, 3),
            round(y0 + (y1 - y0) * frac) + rng.randint(-3, 3),
            rng.randint(MIN_MOVE_INTERVAL_MS, 45),
        )
    writer.emit("up", x1, y1, rng.randint(MIN_MOVE_INTERVAL_MS, 60))


def generate_events(manifest: QuestionManifest, config: SynthConfig) -> list[dict]:
    """Deterministic event stream for the configured synthetic cohort."""
    config.validate()
    rng = random.Random(config.seed)
    grade_values = sorted(config.grades)
    grade_weights = [config.grades[g] for g in grade_values]
    events: list[dict] = []
    width = len(str(config.student_count))
    for n in range(1, config.student_count + 1):
        student = f"u{n:0{width}d}"
        writer = _EventWriter(
            session_id=f"s{n:0{width}d}",
            student_id=student,
            question_id=manifest.question_id,
            grade=rng.choices(grade_values, grade_weights)[0],
        )
        strategy = rng.choices(STRATEGIES, config.mix)[0]
        if strategy == "solution":
            drags = _solution_drags(manifest)
        elif strategy == "greedy":
            drags = _greedy_drags(manifest, rng)
        else:
            drags = _walk_drags(manifest, rng)
        for from_roi, to_roi in drags:
            _emit_drag(writer, manifest.roi(from_roi), manifest.roi(to_roi), rng, config)
        # trailing hesitation so dwell at the final stage is nonzero
        fx, fy = _point_in(manifest.rois[rng.randrange(len(manifest.rois))], rng)
        writer.emit("move", fx, fy, max(200, int(rng.gauss(900, 300))))
        events.extend(writer.events)
    return events


def generate_log(manifest: QuestionManifest, config: SynthConfig) -> str:
    """The event stream as line-delimited JSON text."""
    lines = [
        json.dumps(e, sort_keys=True, separators=(",", ":")) for e in generate_events(manifest, config)
    ]
    return "\n".join(lines) + "\n"
