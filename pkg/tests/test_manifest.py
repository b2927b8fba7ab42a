"""Manifest loading and structural validation."""

from __future__ import annotations

import pytest

from conftest import fig_manifest_dict
from qlens.errors import ManifestError, UnknownReference
from qlens.manifest import load_manifest, manifest_to_dict


def test_round_trip_preserves_content() -> None:
    data = fig_manifest_dict()
    manifest = load_manifest(data)
    again = load_manifest(manifest_to_dict(manifest))
    assert manifest_to_dict(again) == manifest_to_dict(manifest)
    assert manifest.correct_answer == (6, 3, 1, 5, 4, 2)
    assert manifest.condition_count == 6


def test_lookup_tables() -> None:
    manifest = load_manifest(fig_manifest_dict())
    assert manifest.slot_roi(4).roi_id == 4
    assert manifest.source_roi(6).roi_id == 12
    assert manifest.element_value(3) == 3


def test_overlapping_rois_rejected() -> None:
    data = fig_manifest_dict()
    data["rois"][1]["x0"] = data["rois"][0]["x0"]  # slide slot 2 onto slot 1
    with pytest.raises(ManifestError, match="overlap"):
        load_manifest(data)


def test_roi_numbering_must_follow_reading_order() -> None:
    data = fig_manifest_dict()
    data["rois"][0]["id"], data["rois"][1]["id"] = 2, 1
    data["rois"][0]["slot"], data["rois"][1]["slot"] = 2, 1
    with pytest.raises(ManifestError, match="reading order"):
        load_manifest(data)


def test_degenerate_box_rejected() -> None:
    data = fig_manifest_dict()
    data["rois"][0]["x1"] = data["rois"][0]["x0"]
    with pytest.raises(ManifestError, match="degenerate"):
        load_manifest(data)


def test_incomplete_correct_answer_rejected() -> None:
    data = fig_manifest_dict()
    data["correct_answer"][2] = None
    with pytest.raises(ManifestError, match="correct_answer"):
        load_manifest(data)


def test_duplicate_placement_in_correct_answer_rejected() -> None:
    data = fig_manifest_dict()
    data["correct_answer"] = [6, 6, 1, 5, 4, 2]
    with pytest.raises(ManifestError):
        load_manifest(data)


def test_condition_ids_must_be_contiguous() -> None:
    data = fig_manifest_dict()
    data["conditions"][3]["id"] = 9
    with pytest.raises(ManifestError, match="contiguous"):
        load_manifest(data)


def test_declared_kind_must_match_expression() -> None:
    data = fig_manifest_dict()
    data["conditions"][0]["kind"] = "relational"
    with pytest.raises(ManifestError, match="kind"):
        load_manifest(data)


def test_condition_referencing_undeclared_slot() -> None:
    data = fig_manifest_dict()
    data["conditions"][0]["expr"] = "slot(7) = correct"
    with pytest.raises(UnknownReference):
        load_manifest(data)


def test_slot_roi_outside_slot_count() -> None:
    data = fig_manifest_dict()
    data["slot_count"] = 5
    data["correct_answer"] = [6, 3, 1, 5, 4]
    data["conditions"] = data["conditions"][:5]
    with pytest.raises(ManifestError, match="slot"):
        load_manifest(data)


def test_condition_cap() -> None:
    data = fig_manifest_dict()
    data["conditions"] = [
        {"id": i, "kind": "absolute", "expr": "slot(1) = elem(1)", "label": ""}
        for i in range(1, 34)
    ]
    with pytest.raises(ManifestError, match="32"):
        load_manifest(data)
