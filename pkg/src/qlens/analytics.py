"""Error mining, cohort summaries, and data-driven path recommendation."""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass
from typing import Iterable, Optional, Union

import numpy as np

from .answers import Answer, answer_key, answer_to_list, empty_answer
from .conditions import eval_all
from .ingest import Session
from .manifest import QuestionManifest
from .model import TransitionModel

ANALYTICS_SCHEMA = "qlens-analytics/1"


@dataclass
class OverviewStats:
    score_histogram: dict[int, int]
    grade_histogram: dict[int, int]
    time_histogram: dict[int, int]  # minute bucket -> students
    student_count: int


@dataclass
class ErrorSummary:
    rank: int
    answer: Answer
    stage: int
    fail_enders: int
    encounters_fail: list[int]  # per step index, 0..max_step
    encounters_pass: list[int]
    bypass_count: int


@dataclass
class StageSummary:
    stage: int
    hit_times: int
    condition_times: list[int]
    dwell: Optional[dict]  # five-number summary of run durations, ms
    drop_stop_count: int


@dataclass
class ComparisonSummary:
    stages: list[StageSummary]
    student_count: int
    total_time: Optional[dict]  # five-number summary over session totals, ms


@dataclass
class RecommendedPath:
    error_answer: Answer
    path: list[Answer]  # error first, full-stage answer last
    stages: list[int]
    support: list[int]  # traversal count behind each edge
    length: int
    regressions: int  # stage decreases along the path


@dataclass
class NoCoverage:
    """No full-mark session ever visited the error, so no path exists."""

    error_answer: Answer


def fivenum(values: Iterable[float]) -> Optional[dict]:
    """Five-number summary with Tukey whiskers; None for empty input."""
    arr = np.sort(np.asarray(list(values), dtype=float))
    if arr.size == 0:
        return None
    q1, median, q3 = (float(q) for q in np.percentile(arr, [25, 50, 75]))
    iqr = q3 - q1
    inside = arr[(arr >= q1 - 1.5 * iqr) & (arr <= q3 + 1.5 * iqr)]
    return {
        "min": float(arr[0]),
        "q1": q1,
        "median": median,
        "q3": q3,
        "max": float(arr[-1]),
        "whisker_low": float(inside[0]) if inside.size else float(arr[0]),
        "whisker_high": float(inside[-1]) if inside.size else float(arr[-1]),
        "n": int(arr.size),
    }


class _StageOracle:
    """Memoized stage/bits lookup shared by the aggregate passes."""

    def __init__(self, manifest: QuestionManifest):
        self.manifest = manifest
        self.cache: dict[Answer, tuple[str, int]] = {}

    def bits(self, answer: Answer) -> str:
        return self._eval(answer)[0]

    def stage(self, answer: Answer) -> int:
        return self._eval(answer)[1]

    def _eval(self, answer: Answer) -> tuple[str, int]:
        hit = self.cache.get(answer)
        if hit is None:
            hit = eval_all(answer, self.manifest)
            self.cache[answer] = hit
        return hit


def session_score(session: Session, manifest: QuestionManifest) -> int:
    """Score = conditions fulfilled by the final answer."""
    return eval_all(session.final_answer, manifest)[1]


def _latest_per_student(sessions: list[Session]) -> list[Session]:
    latest: dict[str, Session] = {}
    for s in sessions:
        latest[s.student_id] = s  # later entries win
    return list(latest.values())


def overview(sessions: list[Session], manifest: QuestionManifest) -> OverviewStats:
    """Score, grade, and completion-time distributions, one per student."""
    oracle = _StageOracle(manifest)
    scores: Counter = Counter()
    grades: Counter = Counter()
    minutes: Counter = Counter()
    chosen = _latest_per_student(sessions)
    for s in chosen:
        scores[oracle.stage(s.final_answer)] += 1
        grades[s.grade] += 1
        minutes[s.total_time_ms // 60000] += 1
    return OverviewStats(
        score_histogram=dict(scores),
        grade_histogram=dict(grades),
        time_histogram=dict(minutes),
        student_count=len(chosen),
    )


def _path_answers(session: Session, slot_count: int) -> list[Answer]:
    """Step-indexed answers, the implicit all-null step 0 included."""
    return [empty_answer(slot_count)] + [step.answer for step in session.steps]


def group_filter(
    sessions: list[Session],
    manifest: QuestionManifest,
    grades: Optional[set] = None,
    scores: Optional[set] = None,
    student: Optional[str] = None,
) -> list[Session]:
    """Compose grade, score, and student predicates; None means no filter."""
    oracle = _StageOracle(manifest)
    kept = []
    for s in sessions:
        if grades is not None and s.grade not in grades:
            continue
        if scores is not None and oracle.stage(s.final_answer) not in scores:
            continue
        if student is not None and s.student_id != student:
            continue
        kept.append(s)
    return kept


def zipper(
    error_answer: Answer,
    sessions: list[Session],
    manifest: QuestionManifest,
) -> tuple[list[int], list[int]]:
    """Per-step occurrence counts of an answer, split failing vs full-mark.

    Arrays are indexed by step (0..max_step) and count every occurrence,
    not just the first per session.
    """
    oracle = _StageOracle(manifest)
    m = manifest.condition_count
    max_step = max((len(s.steps) for s in sessions), default=0)
    fail = [0] * (max_step + 1)
    passed = [0] * (max_step + 1)
    for s in sessions:
        teeth = fail if oracle.stage(s.final_answer) < m else passed
        for idx, answer in enumerate(_path_answers(s, manifest.slot_count)):
            if answer == error_answer:
                teeth[idx] += 1
    return fail, passed


def common_errors(
    sessions: list[Session],
    manifest: QuestionManifest,
    top_n: int,
) -> list[ErrorSummary]:
    """Rank the incorrect final answers of failing sessions.

    Order: failing students at the answer desc, then total failing
    encounters desc, then slot order. Empty when everyone passes.
    """
    oracle = _StageOracle(manifest)
    m = manifest.condition_count
    enders: dict[Answer, set] = defaultdict(set)
    for s in sessions:
        if oracle.stage(s.final_answer) < m:
            enders[s.final_answer].add(s.student_id)

    summaries = []
    for answer, students in enders.items():
        fail, passed = zipper(answer, sessions, manifest)
        bypass = set()
        for s in sessions:
            if oracle.stage(s.final_answer) < m:
                continue
            if answer in _path_answers(s, manifest.slot_count):
                bypass.add(s.student_id)
        summaries.append(
            ErrorSummary(
                rank=0,
                answer=answer,
                stage=oracle.stage(answer),
                fail_enders=len(students),
                encounters_fail=fail,
                encounters_pass=passed,
                bypass_count=len(bypass),
            )
        )
    summaries.sort(key=lambda e: (-e.fail_enders, -sum(e.encounters_fail), answer_key(e.answer)))
    summaries = summaries[:top_n]
    for i, summary in enumerate(summaries, start=1):
        summary.rank = i
    return summaries


def _restricted_edges(
    error_answer: Answer,
    sessions: tuple[Session, ...],
    manifest: QuestionManifest,
    oracle: _StageOracle,
) -> Optional[dict[Answer, list[tuple[Answer, int]]]]:
    """Answer graph over full-mark sessions that visited the error.

    Returns None when no session qualifies. Edge lists are sorted by
    traversal count desc, destination stage desc, then slot order.
    """
    m = manifest.condition_count
    counts: dict[tuple[Answer, Answer], int] = defaultdict(int)
    qualifying = 0
    for s in sessions:
        if oracle.stage(s.final_answer) < m:
            continue
        path = _path_answers(s, manifest.slot_count)
        if error_answer not in path:
            continue
        qualifying += 1
        for a, b in zip(path, path[1:]):
            counts[(a, b)] += 1
    if qualifying == 0:
        return None
    edges: dict[Answer, list[tuple[Answer, int]]] = defaultdict(list)
    for (a, b), n in counts.items():
        edges[a].append((b, n))
    for a in edges:
        edges[a].sort(key=lambda e: (-e[1], -oracle.stage(e[0]), answer_key(e[0])))
    return edges


def recommend(
    error_answer: Answer,
    model: TransitionModel,
    manifest: QuestionManifest,
) -> Union[RecommendedPath, NoCoverage]:
    """Greedy highest-traversal walk from an error to a full-stage answer.

    The walk runs on the answer graph restricted to full-mark sessions
    that themselves visited the error. An answer may appear once per
    path; when the preferred edge would revisit or dead-end, the walk
    backs up and takes the next-best edge.
    """
    if model.sessions is None:
        raise ValueError("model carries no sessions; rebuild it from the group")
    oracle = _StageOracle(manifest)
    m = manifest.condition_count
    edges = _restricted_edges(error_answer, model.sessions, manifest, oracle)
    if edges is None:
        return NoCoverage(error_answer)

    path: list[Answer] = [error_answer]
    support: list[int] = []
    visited = {error_answer}

    def walk(node: Answer) -> bool:
        if oracle.stage(node) == m:
            return True
        for dest, count in edges.get(node, ()):
            if dest in visited:
                continue
            visited.add(dest)
            path.append(dest)
            support.append(count)
            if walk(dest):
                return True
            visited.discard(dest)
            path.pop()
            support.pop()
        return False

    if not walk(error_answer):
        # qualifying sessions exist, so a completion is always reachable
        return NoCoverage(error_answer)
    stages = [oracle.stage(a) for a in path]
    regressions = sum(1 for a, b in zip(stages, stages[1:]) if b < a)
    return RecommendedPath(
        error_answer=error_answer,
        path=path,
        stages=stages,
        support=support,
        length=len(path) - 1,
        regressions=regressions,
    )


def comparison(sessions: list[Session], manifest: QuestionManifest) -> ComparisonSummary:
    """Stage-occupancy aggregates for one group's column in the side-by-side view.

    Every step (the implicit step 0 included) is one hit of its stage;
    condition tallies accumulate per hit, dwell durations come from
    contiguous same-stage runs, and drop/stops count transitions that
    leave a stage downward or hold it.
    """
    oracle = _StageOracle(manifest)
    m = manifest.condition_count
    hit_times = [0] * (m + 1)
    condition_times = [[0] * m for _ in range(m + 1)]
    dwell_runs: list[list[float]] = [[] for _ in range(m + 1)]
    drop_stop = [0] * (m + 1)
    students: set = set()

    for s in sessions:
        students.add(s.student_id)
        answers = _path_answers(s, manifest.slot_count)
        times = [0] + [step.time_elapse_ms for step in s.steps]
        stages = [oracle.stage(a) for a in answers]
        for answer, stage in zip(answers, stages):
            hit_times[stage] += 1
            row = condition_times[stage]
            for i, bit in enumerate(oracle.bits(answer)):
                if bit == "1":
                    row[i] += 1
        for a, b in zip(stages, stages[1:]):
            if b <= a:
                drop_stop[a] += 1
        run_start = 0
        for idx in range(1, len(stages) + 1):
            if idx < len(stages) and stages[idx] == stages[run_start]:
                continue
            entered = times[run_start]
            left = times[idx] if idx < len(stages) else s.total_time_ms
            dwell_runs[stages[run_start]].append(float(left - entered))
            run_start = idx

    stage_rows = [
        StageSummary(
            stage=stage,
            hit_times=hit_times[stage],
            condition_times=condition_times[stage],
            dwell=fivenum(dwell_runs[stage]),
            drop_stop_count=drop_stop[stage],
        )
        for stage in range(m + 1)
    ]
    return ComparisonSummary(
        stages=stage_rows,
        student_count=len(students),
        total_time=fivenum(float(s.total_time_ms) for s in sessions),
    )


def _histogram_rows(histogram: dict[int, int]) -> list[dict]:
    return [{"value": k, "count": histogram[k]} for k in sorted(histogram)]


def overview_to_dict(stats: OverviewStats) -> dict:
    return {
        "student_count": stats.student_count,
        "scores": _histogram_rows(stats.score_histogram),
        "grades": _histogram_rows(stats.grade_histogram),
        "time_minutes": _histogram_rows(stats.time_histogram),
    }


def error_to_dict(summary: ErrorSummary) -> dict:
    return {
        "rank": summary.rank,
        "answer": answer_to_list(summary.answer),
        "stage": summary.stage,
        "fail_enders": summary.fail_enders,
        "encounters_fail": summary.encounters_fail,
        "encounters_pass": summary.encounters_pass,
        "bypass_count": summary.bypass_count,
    }


def comparison_to_dict(summary: ComparisonSummary) -> dict:
    return {
        "student_count": summary.student_count,
        "total_time": summary.total_time,
        "stages": [
            {
                "stage": row.stage,
                "hit_times": row.hit_times,
                "condition_times": row.condition_times,
                "dwell": row.dwell,
                "drop_stop_count": row.drop_stop_count,
            }
            for row in summary.stages
        ],
    }


def recommendation_to_dict(result: Union[RecommendedPath, NoCoverage]) -> dict:
    if isinstance(result, NoCoverage):
        return {"state": "no_coverage", "error": answer_to_list(result.error_answer)}
    return {
        "state": "path",
        "error": answer_to_list(result.error_answer),
        "path": [answer_to_list(a) for a in result.path],
        "stages": result.stages,
        "support": result.support,
        "length": result.length,
        "regressions": result.regressions,
    }
