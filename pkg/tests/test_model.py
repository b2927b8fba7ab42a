"""Hybrid-state model construction and its aggregates."""

from __future__ import annotations

import pytest

from conftest import WORKED_PAIRS, fig_manifest_dict, session_from_pairs, worked_session_events
from qlens.answers import empty_answer
from qlens.errors import NoSuchState, UnknownStudent
from qlens.conditions import eval_all
from qlens.ingest import build_session
from qlens.manifest import load_manifest
from qlens.model import (
    build_model,
    engagement,
    filter_model,
    model_from_dict,
    model_to_dict,
    state_glyph,
    student_path,
    top_answers,
)
from qlens.serialize import canonical_json_bytes

# correct placements in slot order; prefix of these stays on the solution path
CORRECT_PAIRS = [(12, 1), (9, 2), (7, 3), (11, 4), (10, 5), (8, 6)]


def test_single_worked_session_states_and_transitions(fig_manifest) -> None:
    session = build_session(worked_session_events(fig_manifest), fig_manifest)
    model = build_model([session], fig_manifest)
    assert set(model.states) == {(0, 0), (1, 1)} | {(k, 2) for k in range(2, 7)}
    assert all(t.count == 1 for t in model.transitions)
    assert [(t.step, t.from_stage, t.to_stage) for t in model.transitions] == [
        (1, 0, 1), (2, 1, 2), (3, 2, 2), (4, 2, 2), (5, 2, 2), (6, 2, 2),
    ]
    assert model.max_step == 6
    assert model.states[(6, 2)].end_count == 1


def test_state_glyph_counts_and_width(fig_manifest) -> None:
    sessions = [
        build_session(worked_session_events(fig_manifest, session=f"s{i}", student=f"u{i}"), fig_manifest)
        for i in range(3)
    ]
    model = build_model(sessions, fig_manifest)
    counts, width = state_glyph(model, 1, 1)
    assert counts == [3, 0, 0, 0, 0, 0]
    assert width == 3
    counts0, width0 = state_glyph(model, 0, 0)
    assert counts0 == [0] * 6
    assert width0 == 3
    with pytest.raises(NoSuchState):
        state_glyph(model, 9, 9)


def test_thirty_three_students_move_zero_to_one(fig_manifest) -> None:
    # step 1 misplaces element 1, step 2 drops element 6 onto it
    sessions = [
        session_from_pairs(fig_manifest, [(7, 1), (12, 1)], session=f"s{i:02d}", student=f"u{i:02d}")
        for i in range(33)
    ]
    model = build_model(sessions, fig_manifest)
    assert model.states[(1, 0)].width_students == 33
    assert model.states[(2, 1)].width_students == 33
    assert [(t.step, t.from_stage, t.to_stage, t.count) for t in model.transitions] == [
        (1, 0, 0, 33), (2, 0, 1, 33),
    ]


def test_shared_prefix_then_branch(fig_manifest) -> None:
    shared = [CORRECT_PAIRS[0]]
    a = shared + [CORRECT_PAIRS[1]]
    b = shared + [(10, 2)]  # element 4 into slot 2: wrong
    sessions = [
        session_from_pairs(fig_manifest, a, session="s1", student="u1"),
        session_from_pairs(fig_manifest, a, session="s2", student="u2"),
        session_from_pairs(fig_manifest, b, session="s3", student="u3"),
    ]
    model = build_model(sessions, fig_manifest)
    by_key = {(t.step, t.from_stage, t.to_stage): t.count for t in model.transitions}
    assert by_key[(1, 0, 1)] == 3
    assert by_key[(2, 1, 2)] == 2
    assert by_key[(2, 1, 1)] == 1


def test_flow_conservation_and_widths(fig_manifest) -> None:
    sessions = [
        session_from_pairs(fig_manifest, CORRECT_PAIRS[:n], session=f"s{n}", student=f"u{n}")
        for n in range(1, 7)
    ]
    model = build_model(sessions, fig_manifest)
    for (step, stage), state in model.states.items():
        if step == 0:
            continue
        inflow = sum(t.count for t in model.transitions if (t.step, t.to_stage) == (step, stage))
        outflow = sum(
            t.count for t in model.transitions if (t.step - 1, t.from_stage) == (step, stage)
        )
        assert inflow == outflow + state.end_count
    for step in range(0, model.max_step + 1):
        alive = sum(1 for s in sessions if len(s.steps) >= step)
        width = sum(st.session_count for (k, _), st in model.states.items() if k == step)
        assert width == alive


def test_level2_answers_reevaluate_to_their_stage(fig_manifest) -> None:
    sessions = [
        session_from_pairs(fig_manifest, WORKED_PAIRS, session="s1", student="u1"),
        session_from_pairs(fig_manifest, CORRECT_PAIRS, session="s2", student="u2"),
    ]
    model = build_model(sessions, fig_manifest)
    for (step, stage), state in model.states.items():
        for stat in state.answers:
            assert eval_all(stat.answer, fig_manifest)[1] == stage


def test_single_drag_can_fulfill_two_conditions() -> None:
    data = fig_manifest_dict()
    data["conditions"] = [
        {"id": 1, "kind": "absolute", "expr": "slot(1) = elem(6)", "label": ""},
        {"id": 2, "kind": "relational", "expr": "val(slot(1)) = val(slot(1))", "label": ""},
    ]
    manifest = load_manifest(data)
    session = session_from_pairs(manifest, [(12, 1)])
    model = build_model([session], manifest)
    assert (1, 2) in model.states  # stage jumped 0 -> 2 in one step


def test_top_answers_ranked_by_count_then_slots(fig_manifest) -> None:
    pair_sets = [CORRECT_PAIRS[:1], CORRECT_PAIRS[:1], [(7, 1)], [(8, 1)]]
    sessions = [
        session_from_pairs(fig_manifest, pairs, session=f"s{i}", student=f"u{i}")
        for i, pairs in enumerate(pair_sets)
    ]
    model = build_model(sessions, fig_manifest)
    ranked = top_answers(model, 1, 1, 5)
    assert [a.answer for a in ranked] == [(6, None, None, None, None, None)]
    assert ranked[0].count == 2
    wrong = top_answers(model, 1, 0, 5)
    assert [a.answer[0] for a in wrong] == [1, 2]  # equal counts, slot order
    with pytest.raises(NoSuchState):
        top_answers(model, 8, 0, 1)


def test_empty_group_keeps_anchor_state(fig_manifest) -> None:
    model = build_model([], fig_manifest)
    assert set(model.states) == {(0, 0)}
    assert model.states[(0, 0)].width_students == 0
    assert model.transitions == []
    assert model.engagement == []


def test_filter_model_thresholds_and_preserves_original(fig_manifest) -> None:
    shared = [CORRECT_PAIRS[0]]
    sessions = [
        session_from_pairs(fig_manifest, shared + CORRECT_PAIRS[1:2], session="s1", student="u1"),
        session_from_pairs(fig_manifest, shared + CORRECT_PAIRS[1:2], session="s2", student="u2"),
        session_from_pairs(fig_manifest, shared + [(10, 2)], session="s3", student="u3"),
    ]
    model = build_model(sessions, fig_manifest)
    before = canonical_json_bytes(model_to_dict(model))
    assert filter_model(model, 0) is model
    view = filter_model(model, 2)
    assert all(t.count >= 2 for t in view.transitions)
    assert (2, 1) not in view.states
    assert (0, 0) in view.states
    assert canonical_json_bytes(model_to_dict(model)) == before
    everything_hidden = filter_model(model, 99)
    assert set(everything_hidden.states) == {(0, 0)}


def test_student_path_overlay(fig_manifest) -> None:
    session = build_session(worked_session_events(fig_manifest), fig_manifest)
    model = build_model([session], fig_manifest)
    path = student_path(model, session, fig_manifest)
    assert path[0] == (0, 0, empty_answer(6))
    assert [(step, stage) for step, stage, _ in path] == [
        (0, 0), (1, 1), (2, 2), (3, 2), (4, 2), (5, 2), (6, 2),
    ]
    other = build_session(
        worked_session_events(fig_manifest, session="sx", student="stranger"), fig_manifest
    )
    with pytest.raises(UnknownStudent):
        student_path(model, other, fig_manifest)


def test_engagement_differences_and_dropoff(fig_manifest) -> None:
    long = session_from_pairs(fig_manifest, CORRECT_PAIRS[:2], session="s1", student="u1")
    short = session_from_pairs(fig_manifest, CORRECT_PAIRS[:1], session="s2", student="u2")
    series = engagement([long, short])
    assert [p.active_count for p in series] == [2, 1]
    assert [p.progressed_count for p in series] == [1, 0]
    assert series[0].mean_time_ms == pytest.approx(60.0)
    assert series[1].mean_time_ms == pytest.approx(1000.0)
    assert engagement([]) == []


def test_model_export_reload_round_trip(fig_manifest) -> None:
    sessions = [
        session_from_pairs(fig_manifest, WORKED_PAIRS, session="s1", student="u1"),
        session_from_pairs(fig_manifest, CORRECT_PAIRS, session="s2", student="u2"),
        session_from_pairs(fig_manifest, CORRECT_PAIRS[:3], session="s3", student="u3"),
    ]
    exported = model_to_dict(build_model(sessions, fig_manifest, group={"grades": None}))
    payload = canonical_json_bytes(exported)
    reloaded = model_from_dict(exported)
    assert canonical_json_bytes(model_to_dict(reloaded)) == payload
    assert exported["schema"] == "qlens-model/1"
