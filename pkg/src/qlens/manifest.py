"""Question manifests: ROIs, slots, elements, conditions, correct answer.

ROIs are supplied declaratively per question rather than recovered from
question imagery, so the ingest pipeline is independent of rendering.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from .answers import Answer, answer_from_list
from .conditions import ConditionSpec, parse_condition
from .errors import ManifestError

MANIFEST_SCHEMA = "qlens-manifest/1"

ROLE_SOURCE = "source"
ROLE_SLOT = "slot"
ROLE_INERT = "inert"
MAX_CONDITIONS = 32  # condition arrays fit a 32-bit mask


@dataclass(frozen=True)
class Element:
    """An interactive element students drag into answer slots."""

    element_id: int
    value: float | int | str
    label: str = ""


@dataclass(frozen=True)
class RoiBox:
    """Axis-aligned interactive region; containment is edge-inclusive."""

    roi_id: int
    x0: int
    y0: int
    x1: int
    y1: int
    role: str  # "source" | "slot" | "inert"
    element_id: Optional[int] = None  # for role == "source"
    slot_index: Optional[int] = None  # for role == "slot"

    def contains(self, x: int, y: int) -> bool:
        return self.x0 <= x <= self.x1 and self.y0 <= y <= self.y1

    def overlaps(self, other: "RoiBox") -> bool:
        return not (
            self.x1 < other.x0 or other.x1 < self.x0 or self.y1 < other.y0 or other.y1 < self.y0
        )

    def center(self) -> tuple[int, int]:
        return (self.x0 + self.x1) // 2, (self.y0 + self.y1) // 2


@dataclass
class QuestionManifest:
    """Everything needed to interpret mouse events for one question.

    Treated as immutable once loaded; lookup tables are built eagerly.
    """

    question_id: str
    slot_count: int
    elements: tuple[Element, ...]
    rois: tuple[RoiBox, ...]
    correct_answer: Answer
    conditions: tuple[ConditionSpec, ...]
    title: str = ""
    description: str = ""
    solution_steps: Optional[tuple[Answer, ...]] = None
    _roi_by_id: dict = field(init=False, repr=False)
    _element_by_id: dict = field(init=False, repr=False)
    _slot_roi: dict = field(init=False, repr=False)
    _source_roi: dict = field(init=False, repr=False)

    def __post_init__(self):
        self._roi_by_id = {r.roi_id: r for r in self.rois}
        self._element_by_id = {e.element_id: e for e in self.elements}
        self._slot_roi = {r.slot_index: r for r in self.rois if r.role == ROLE_SLOT}
        self._source_roi = {r.element_id: r for r in self.rois if r.role == ROLE_SOURCE}

    @property
    def condition_count(self) -> int:
        return len(self.conditions)

    def roi(self, roi_id: int) -> RoiBox:
        return self._roi_by_id[roi_id]

    def element(self, element_id: int) -> Element:
        return self._element_by_id[element_id]

    def element_value(self, element_id: int):
        return self._element_by_id[element_id].value

    def slot_roi(self, slot_index: int) -> RoiBox:
        return self._slot_roi[slot_index]

    def source_roi(self, element_id: int) -> RoiBox:
        return self._source_roi[element_id]


def _require(data: dict, key: str, context: str):
    if key not in data:
        raise ManifestError(f"{context}: missing required field {key!r}")
    return data[key]


def _parse_roi(entry: dict) -> RoiBox:
    roi_id = _require(entry, "id", "roi")
    role = _require(entry, "role", f"roi {roi_id}")
    if role not in (ROLE_SOURCE, ROLE_SLOT, ROLE_INERT):
        raise ManifestError(f"roi {roi_id}: unknown role {role!r}")
    box = RoiBox(
        roi_id=roi_id,
        x0=_require(entry, "x0", f"roi {roi_id}"),
        y0=_require(entry, "y0", f"roi {roi_id}"),
        x1=_require(entry, "x1", f"roi {roi_id}"),
        y1=_require(entry, "y1", f"roi {roi_id}"),
        role=role,
        element_id=entry.get("element"),
        slot_index=entry.get("slot"),
    )
    if box.x0 >= box.x1 or box.y0 >= box.y1:
        raise ManifestError(f"roi {roi_id}: degenerate box ({box.x0},{box.y0},{box.x1},{box.y1})")
    if role == ROLE_SOURCE and box.element_id is None:
        raise ManifestError(f"roi {roi_id}: source role requires an element id")
    if role == ROLE_SLOT and box.slot_index is None:
        raise ManifestError(f"roi {roi_id}: slot role requires a slot index")
    return box


def _validate_rois(rois: tuple[RoiBox, ...], slot_count: int, element_ids: set[int]) -> None:
    ids = [r.roi_id for r in rois]
    if len(ids) != len(set(ids)):
        raise ManifestError("roi ids must be unique")
    if any(i < 1 for i in ids):
        raise ManifestError("roi ids must be >= 1")
    for i, a in enumerate(rois):
        for b in rois[i + 1 :]:
            if a.overlaps(b):
                raise ManifestError(f"rois {a.roi_id} and {b.roi_id} overlap")
    # numbering follows reading order: top-left to bottom-right
    by_id = sorted(rois, key=lambda r: r.roi_id)
    reading = sorted(rois, key=lambda r: (r.y0, r.x0))
    if [r.roi_id for r in by_id] != [r.roi_id for r in reading]:
        raise ManifestError("roi numbering must follow reading order (top-left to bottom-right)")
    slots = [r.slot_index for r in rois if r.role == ROLE_SLOT]
    if len(slots) != len(set(slots)):
        raise ManifestError("two rois map to the same slot")
    for s in slots:
        if not 1 <= s <= slot_count:
            raise ManifestError(f"slot roi references slot {s} outside 1..{slot_count}")
    sources = [r.element_id for r in rois if r.role == ROLE_SOURCE]
    if len(sources) != len(set(sources)):
        raise ManifestError("two rois map to the same source element")
    for e in sources:
        if e not in element_ids:
            raise ManifestError(f"source roi references undeclared element {e}")


def load_manifest(source) -> QuestionManifest:
    """Build and validate a manifest from a dict, a JSON string, or a path."""
    if isinstance(source, (str, Path)) and not str(source).lstrip().startswith("{"):
        data = json.loads(Path(source).read_text(encoding="utf-8"))
    elif isinstance(source, str):
        data = json.loads(source)
    else:
        data = source
    if not isinstance(data, dict):
        raise ManifestError("manifest must be a JSON object")

    question_id = str(_require(data, "question", "manifest"))
    slot_count = _require(data, "slot_count", "manifest")
    if not isinstance(slot_count, int) or slot_count < 1:
        raise ManifestError(f"slot_count must be a positive integer, got {slot_count!r}")

    elements = []
    for entry in _require(data, "elements", "manifest"):
        elements.append(
            Element(
                element_id=_require(entry, "id", "element"),
                value=_require(entry, "value", "element"),
                label=str(entry.get("label", "")),
            )
        )
    element_ids = {e.element_id for e in elements}
    if len(element_ids) != len(elements):
        raise ManifestError("element ids must be unique")

    rois = tuple(_parse_roi(entry) for entry in _require(data, "rois", "manifest"))
    _validate_rois(rois, slot_count, element_ids)

    try:
        correct = answer_from_list(_require(data, "correct_answer", "manifest"), slot_count)
    except ValueError as exc:
        raise ManifestError(f"correct_answer: {exc}") from exc
    if any(v is None for v in correct):
        raise ManifestError("correct_answer must fill every slot")
    for v in correct:
        if v not in element_ids:
            raise ManifestError(f"correct_answer references undeclared element {v}")

    conditions = []
    for entry in _require(data, "conditions", "manifest"):
        cond_id = _require(entry, "id", "condition")
        spec = parse_condition(
            _require(entry, "expr", f"condition {cond_id}"),
            cond_id=cond_id,
            label=str(entry.get("label", "")),
            slot_count=slot_count,
            element_ids=element_ids,
        )
        declared_kind = entry.get("kind")
        if declared_kind is not None and declared_kind != spec.kind:
            raise ManifestError(
                f"condition {cond_id}: declared kind {declared_kind!r} but expression is {spec.kind}"
            )
        conditions.append(spec)
    if [c.cond_id for c in conditions] != list(range(1, len(conditions) + 1)):
        raise ManifestError("condition ids must be contiguous from 1")
    if len(conditions) > MAX_CONDITIONS:
        raise ManifestError(f"at most {MAX_CONDITIONS} conditions are supported")

    solution_steps = None
    if data.get("solution_steps") is not None:
        try:
            solution_steps = tuple(
                answer_from_list(step, slot_count) for step in data["solution_steps"]
            )
        except ValueError as exc:
            raise ManifestError(f"solution_steps: {exc}") from exc
        for step in solution_steps:
            for v in step:
                if v is not None and v not in element_ids:
                    raise ManifestError(f"solution_steps references undeclared element {v}")

    return QuestionManifest(
        question_id=question_id,
        slot_count=slot_count,
        elements=tuple(elements),
        rois=rois,
        correct_answer=correct,
        conditions=tuple(conditions),
        title=str(data.get("title", "")),
        description=str(data.get("description", "")),
        solution_steps=solution_steps,
    )


def manifest_to_dict(manifest: QuestionManifest) -> dict:
    """Serialize back to the on-disk JSON layout."""
    rois = []
    for r in manifest.rois:
        entry = {"id": r.roi_id, "x0": r.x0, "y0": r.y0, "x1": r.x1, "y1": r.y1, "role": r.role}
        if r.role == ROLE_SOURCE:
            entry["element"] = r.element_id
        elif r.role == ROLE_SLOT:
            entry["slot"] = r.slot_index
        rois.append(entry)
    return {
        "schema": MANIFEST_SCHEMA,
        "question": manifest.question_id,
        "title": manifest.title,
        "description": manifest.description,
        "slot_count": manifest.slot_count,
        "elements": [
            {"id": e.element_id, "value": e.value, "label": e.label} for e in manifest.elements
        ],
        "rois": rois,
        "correct_answer": list(manifest.correct_answer),
        "conditions": [
            {"id": c.cond_id, "kind": c.kind, "expr": c.expr, "label": c.label}
            for c in manifest.conditions
        ],
        "solution_steps": (
            None
            if manifest.solution_steps is None
            else [list(step) for step in manifest.solution_steps]
        ),
    }
