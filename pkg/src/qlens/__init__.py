"""qlens: reconstruct and analyze multi-step problem-solving behavior.

Raw mouse-event logs become sessions of intermediate answers, sessions
become a two-level (step, stage) transition model, and the model backs
error mining, cohort comparison, and data-driven path recommendation.
"""

from .analytics import (
    ComparisonSummary,
    ErrorSummary,
    NoCoverage,
    OverviewStats,
    RecommendedPath,
    common_errors,
    comparison,
    group_filter,
    overview,
    recommend,
    zipper,
)
from .conditions import ConditionSpec, eval_all, eval_condition, parse_condition
from .errors import QLensError
from .ingest import (
    DragAction,
    RawEvent,
    Session,
    Step,
    apply_drag,
    build_session,
    hit_test,
    pair_drags,
    parse_events,
    sessions_from_log,
)
from .manifest import Element, QuestionManifest, RoiBox, load_manifest, manifest_to_dict
from .model import (
    HybridState,
    Transition,
    TransitionModel,
    build_model,
    engagement,
    filter_model,
    model_from_dict,
    model_to_dict,
    state_glyph,
    student_path,
    top_answers,
)
from .service import GroupQuery, create_app, views_payload
from .store import Store
from .synth import SynthConfig, generate_events, generate_log

__version__ = "0.1.0"

__all__ = [
    "ComparisonSummary",
    "ConditionSpec",
    "DragAction",
    "Element",
    "ErrorSummary",
    "GroupQuery",
    "HybridState",
    "NoCoverage",
    "OverviewStats",
    "QLensError",
    "QuestionManifest",
    "RawEvent",
    "RecommendedPath",
    "RoiBox",
    "Session",
    "Step",
    "Store",
    "SynthConfig",
    "Transition",
    "TransitionModel",
    "apply_drag",
    "build_model",
    "build_session",
    "common_errors",
    "comparison",
    "create_app",
    "engagement",
    "eval_all",
    "eval_condition",
    "filter_model",
    "generate_events",
    "generate_log",
    "group_filter",
    "hit_test",
    "load_manifest",
    "manifest_to_dict",
    "model_from_dict",
    "model_to_dict",
    "overview",
    "pair_drags",
    "parse_condition",
    "parse_events",
    "recommend",
    "sessions_from_log",
    "state_glyph",
    "student_path",
    "top_answers",
    "views_payload",
    "zipper",
]
