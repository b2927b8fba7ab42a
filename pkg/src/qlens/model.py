"""Two-level transition model over (step, stage) states.

Level 1 aggregates sessions into (step, stage) states joined by
step-advancing transitions; level 2 keeps the intermediate answers
behind each state and the answer-to-answer graph used for path
recommendation.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Optional

from .answers import Answer, answer_key, answer_to_list, empty_answer
from .conditions import eval_all
from .errors import NoSuchState, UnknownStudent
from .ingest import Session
from .manifest import QuestionManifest

MODEL_SCHEMA = "qlens-model/1"

StateKey = tuple[int, int]  # (step, stage)


@dataclass(frozen=True)
class AnswerStat:
    answer: Answer
    count: int
    mean_time_ms: float
    mean_traj_px: float


@dataclass
class HybridState:
    """Aggregates for one (step, stage) node of the transition graph."""

    step: int
    stage: int
    session_count: int
    width_students: int
    end_count: int  # sessions whose path terminates here
    condition_counts: list[int]
    answers: list[AnswerStat]

    @property
    def key(self) -> StateKey:
        return (self.step, self.stage)


@dataclass(frozen=True)
class Transition:
    step: int  # destination step; source step is step - 1
    from_stage: int
    to_stage: int
    count: int


@dataclass(frozen=True)
class EngagementPoint:
    step: int
    mean_time_ms: float
    mean_traj_px: float
    active_count: int
    progressed_count: int


@dataclass
class TransitionModel:
    question_id: str
    group: dict
    m: int
    max_step: int
    states: dict[StateKey, HybridState]
    transitions: list[Transition]
    engagement: list[EngagementPoint]
    session_count: int
    student_count: int
    # in-memory only, absent after an export/reload round trip
    sessions: Optional[tuple[Session, ...]] = None
    level2: Optional[dict[tuple[Answer, Answer], int]] = None
    students: frozenset = field(default_factory=frozenset)


def session_stages(session: Session, manifest: QuestionManifest, cache=None):
    """Stage of each step of a session, step 0 (all-null) included."""
    stages = [0]
    for step in session.steps:
        if cache is not None:
            hit = cache.get(step.answer)
            if hit is None:
                hit = eval_all(step.answer, manifest)
                cache[step.answer] = hit
            stages.append(hit[1])
        else:
            stages.append(eval_all(step.answer, manifest)[1])
    return stages


def engagement(sessions: list[Session]) -> list[EngagementPoint]:
    """Per-step means of incremental time and cursor path, with drop-off."""
    max_step = max((len(s.steps) for s in sessions), default=0)
    points = []
    for step in range(1, max_step + 1):
        active = [s for s in sessions if len(s.steps) >= step]
        time_sum = 0.0
        traj_sum = 0.0
        for s in active:
            prev_t = s.steps[step - 2].time_elapse_ms if step > 1 else 0
            prev_d = s.steps[step - 2].traj_len_px if step > 1 else 0.0
            time_sum += s.steps[step - 1].time_elapse_ms - prev_t
            traj_sum += s.steps[step - 1].traj_len_px - prev_d
        progressed = sum(1 for s in active if len(s.steps) >= step + 1)
        points.append(
            EngagementPoint(
                step=step,
                mean_time_ms=time_sum / len(active),
                mean_traj_px=traj_sum / len(active),
                active_count=len(active),
                progressed_count=progressed,
            )
        )
    return points


def build_model(
    sessions: list[Session],
    manifest: QuestionManifest,
    group: Optional[dict] = None,
) -> TransitionModel:
    """Fold a group of sessions into the hybrid-state model.

    An empty group still yields the (0,0) state so every view has an
    anchor node.
    """
    m = manifest.condition_count
    eval_cache: dict[Answer, tuple[str, int]] = {}

    sess_count: dict[StateKey, int] = defaultdict(int)
    stud_sets: dict[StateKey, set] = defaultdict(set)
    end_count: dict[StateKey, int] = defaultdict(int)
    cond_students: dict[StateKey, list[set]] = defaultdict(lambda: [set() for _ in range(m)])
    answer_acc: dict[StateKey, dict[Answer, list]] = defaultdict(dict)
    trans_count: dict[tuple[int, int, int], int] = defaultdict(int)
    level2: dict[tuple[Answer, Answer], int] = defaultdict(int)

    def touch(key: StateKey, student: str, answer: Answer, t_ms: int, traj_px: float) -> None:
        sess_count[key] += 1
        stud_sets[key].add(student)
        bits, _ = eval_cache[answer]
        for i, bit in enumerate(bits):
            if bit == "1":
                cond_students[key][i].add(student)
        acc = answer_acc[key].setdefault(answer, [0, 0.0, 0.0])
        acc[0] += 1
        acc[1] += t_ms
        acc[2] += traj_px

    empty = empty_answer(manifest.slot_count)
    eval_cache[empty] = eval_all(empty, manifest)
    max_step = 0
    students = set()
    for session in sessions:
        students.add(session.student_id)
        touch((0, 0), session.student_id, empty, 0, 0.0)
        prev_stage = 0
        prev_answer = empty
        for step in session.steps:
            if step.answer not in eval_cache:
                eval_cache[step.answer] = eval_all(step.answer, manifest)
            stage = eval_cache[step.answer][1]
            touch((step.index, stage), session.student_id, step.answer,
                  step.time_elapse_ms, step.traj_len_px)
            trans_count[(step.index, prev_stage, stage)] += 1
            level2[(prev_answer, step.answer)] += 1
            prev_stage = stage
            prev_answer = step.answer
        end_count[(len(session.steps), prev_stage)] += 1
        max_step = max(max_step, len(session.steps))

    if not sessions:
        sess_count[(0, 0)] = 0  # materialize the anchor state

    states: dict[StateKey, HybridState] = {}
    for key in sorted(sess_count):
        stats = [
            AnswerStat(ans, acc[0], acc[1] / acc[0], acc[2] / acc[0])
            for ans, acc in answer_acc[key].items()
        ]
        stats.sort(key=lambda a: (-a.count, answer_key(a.answer)))
        states[key] = HybridState(
            step=key[0],
            stage=key[1],
            session_count=sess_count[key],
            width_students=len(stud_sets[key]),
            end_count=end_count.get(key, 0),
            condition_counts=[len(s) for s in cond_students[key]],
            answers=stats,
        )

    transitions = [
        Transition(step, frm, to, trans_count[(step, frm, to)])
        for step, frm, to in sorted(trans_count)
    ]
    return TransitionModel(
        question_id=manifest.question_id,
        group=dict(group or {}),
        m=m,
        max_step=max_step,
        states=states,
        transitions=transitions,
        engagement=engagement(sessions),
        session_count=len(sessions),
        student_count=len(students),
        sessions=tuple(sessions),
        level2=dict(level2),
        students=frozenset(students),
    )


def state_glyph(model: TransitionModel, step: int, stage: int) -> tuple[list[int], int]:
    """Condition counts and width for one glyph."""
    state = model.states.get((step, stage))
    if state is None:
        raise NoSuchState(f"no state at step {step}, stage {stage}")
    return list(state.condition_counts), state.width_students


def top_answers(model: TransitionModel, step: int, stage: int, k: int) -> list[AnswerStat]:
    """The k most frequent answers at a state, ties broken by slot order."""
    state = model.states.get((step, stage))
    if state is None:
        raise NoSuchState(f"no state at step {step}, stage {stage}")
    return state.answers[:k]


def filter_model(model: TransitionModel, min_count: int) -> TransitionModel:
    """View with transitions under min_count hidden; never mutates."""
    if min_count <= 0:
        return model
    kept = [t for t in model.transitions if t.count >= min_count]
    incident: set[StateKey] = {(0, 0)}
    for t in kept:
        incident.add((t.step - 1, t.from_stage))
        incident.add((t.step, t.to_stage))
    states = {k: v for k, v in model.states.items() if k in incident}
    return TransitionModel(
        question_id=model.question_id,
        group=model.group,
        m=model.m,
        max_step=model.max_step,
        states=states,
        transitions=kept,
        engagement=model.engagement,
        session_count=model.session_count,
        student_count=model.student_count,
        sessions=model.sessions,
        level2=model.level2,
        students=model.students,
    )


def student_path(
    model: TransitionModel, session: Session, manifest: QuestionManifest
) -> list[tuple[int, int, Answer]]:
    """The (step, stage, answer) trace of one session, for path overlay."""
    if session.student_id not in model.students:
        raise UnknownStudent(f"student {session.student_id!r} not in this group")
    path = [(0, 0, empty_answer(manifest.slot_count))]
    for step, stage in zip(session.steps, session_stages(session, manifest)[1:]):
        path.append((step.index, stage, step.answer))
    return path


def model_to_dict(model: TransitionModel) -> dict:
    """Wire form of the model; deterministic field and list order."""
    return {
        "schema": MODEL_SCHEMA,
        "question": model.question_id,
        "group": model.group,
        "m": model.m,
        "max_step": model.max_step,
        "session_count": model.session_count,
        "student_count": model.student_count,
        "states": [
            {
                "step": s.step,
                "stage": s.stage,
                "sessions": s.session_count,
                "students": s.width_students,
                "ends": s.end_count,
                "condition_counts": s.condition_counts,
                "answers": [
                    {
                        "slots": answer_to_list(a.answer),
                        "count": a.count,
                        "mean_time_ms": a.mean_time_ms,
                        "mean_traj_px": a.mean_traj_px,
                    }
                    for a in s.answers
                ],
            }
            for _, s in sorted(model.states.items())
        ],
        "transitions": [
            {"step": t.step, "from_stage": t.from_stage, "to_stage": t.to_stage, "count": t.count}
            for t in model.transitions
        ],
        "engagement": [
            {
                "step": p.step,
                "mean_time_ms": p.mean_time_ms,
                "mean_traj_px": p.mean_traj_px,
                "active": p.active_count,
                "progressed": p.progressed_count,
            }
            for p in model.engagement
        ],
    }


def model_from_dict(data: dict) -> TransitionModel:
    """Rebuild a model from its wire form (level-2 detail is not carried)."""
    states = {}
    for entry in data["states"]:
        key = (entry["step"], entry["stage"])
        states[key] = HybridState(
            step=entry["step"],
            stage=entry["stage"],
            session_count=entry["sessions"],
            width_students=entry["students"],
            end_count=entry["ends"],
            condition_counts=list(entry["condition_counts"]),
            answers=[
                AnswerStat(
                    answer=tuple(a["slots"]),
                    count=a["count"],
                    mean_time_ms=a["mean_time_ms"],
                    mean_traj_px=a["mean_traj_px"],
                )
                for a in entry["answers"]
            ],
        )
    return TransitionModel(
        question_id=data["question"],
        group=dict(data["group"]),
        m=data["m"],
        max_step=data["max_step"],
        states=states,
        transitions=[
            Transition(t["step"], t["from_stage"], t["to_stage"], t["count"])
            for t in data["transitions"]
        ],
        engagement=[
            EngagementPoint(
                step=p["step"],
                mean_time_ms=p["mean_time_ms"],
                mean_traj_px=p["mean_traj_px"],
                active_count=p["active"],
                progressed_count=p["progressed"],
            )
            for p in data["engagement"]
        ],
        session_count=data["session_count"],
        student_count=data["student_count"],
    )
