"""Command-line front door: ingest, report, generate, recommend, export, serve."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional

from .analytics import (
    ANALYTICS_SCHEMA,
    common_errors,
    comparison,
    comparison_to_dict,
    error_to_dict,
    group_filter,
    overview,
    overview_to_dict,
    recommend,
    recommendation_to_dict,
)
from .errors import InvalidConfig, InvalidQuery, QLensError
from .manifest import load_manifest
from .model import build_model
from .serialize import canonical_json_bytes
from .service import (
    DEFAULT_TOP_ERRORS,
    GroupQuery,
    create_app,
    ingest_payload,
    parse_int_set,
    recommendation_payload,
    views_payload,
)
from .store import Store
from .synth import SynthConfig, generate_log


def _require_file(path: Path) -> Optional[int]:
    if not path.is_file():
        print(f"error: no such file: {path}", file=sys.stderr)
        return 2
    return None


def _emit_json(payload: dict) -> None:
    """Exact canonical bytes, no trailing newline; matches service responses."""
    sys.stdout.buffer.write(canonical_json_bytes(payload))
    sys.stdout.buffer.flush()


def _query_from_args(args) -> GroupQuery:
    return GroupQuery(
        grades=parse_int_set(args.grades, "grades"),
        scores=parse_int_set(args.scores, "scores"),
        student=args.student,
        min_count=args.min_count,
    )


def cmd_ingest(args) -> int:
    manifest_path = Path(args.manifest)
    log_path = Path(args.log)
    for path in (manifest_path, log_path):
        code = _require_file(path)
        if code is not None:
            return code
    store = Store(args.store)
    manifest = load_manifest(manifest_path)
    store.put_manifest(manifest)
    report = ingest_payload(store, manifest.question_id, log_path.read_bytes())
    print(json.dumps(report, indent=2, sort_keys=True))
    return 0


def _print_report_table(payload: dict) -> None:
    ov = payload["overview"]
    print(f"question {payload['question']}  students {ov['student_count']}")
    for name in ("scores", "grades", "time_minutes"):
        row = "  ".join(f"{r['value']}:{r['count']}" for r in ov[name])
        print(f"{name:>12}  {row}")
    print()
    print("errors")
    print(f"{'rank':>6} {'stage':>6} {'fails':>6} {'bypass':>7}  answer")
    for e in payload["errors"]:
        slots = ",".join("-" if v is None else str(v) for v in e["answer"])
        print(f"{e['rank']:>6} {e['stage']:>6} {e['fail_enders']:>6} {e['bypass_count']:>7}  ({slots})")
    print()
    print("comparison")
    print(f"{'stage':>6} {'hits':>6} {'drops':>6}  {'dwell median ms':>16}")
    for row in payload["comparison"]["stages"]:
        dwell = "-" if row["dwell"] is None else f"{row['dwell']['median']:.0f}"
        print(f"{row['stage']:>6} {row['hit_times']:>6} {row['drop_stop_count']:>6}  {dwell:>16}")
    print()
    print("engagement")
    print(f"{'step':>6} {'active':>7} {'progressed':>11} {'mean ms':>10} {'mean px':>10}")
    for p in payload["engagement"]:
        print(
            f"{p['step']:>6} {p['active']:>7} {p['progressed']:>11}"
            f" {p['mean_time_ms']:>10.0f} {p['mean_traj_px']:>10.0f}"
        )


def cmd_report(args) -> int:
    store = Store(args.store)
    payload = views_payload(store, args.question, _query_from_args(args), args.top_errors)
    if args.format == "json":
        _emit_json(payload)
    else:
        _print_report_table(payload)
    return 0


def _parse_grade_weights(text: str) -> dict:
    weights = {}
    for part in text.split(","):
        if ":" not in part:
            raise InvalidConfig(f"grade weights look like 2:0.5,7:0.5, got {part!r}")
        grade, weight = part.split(":", 1)
        weights[int(grade)] = float(weight)
    return weights


def cmd_generate(args) -> int:
    manifest_path = Path(args.manifest)
    code = _require_file(manifest_path)
    if code is not None:
        return code
    manifest = load_manifest(manifest_path)
    config = SynthConfig(
        student_count=args.students,
        grades=_parse_grade_weights(args.grades),
        mix=tuple(float(p) for p in args.mix.split(",")),
        think_ms_mean=args.think_mean,
        think_ms_sd=args.think_sd,
        seed=args.seed,
    )
    text = generate_log(manifest, config)
    Path(args.out).write_text(text, encoding="utf-8")
    print(
        json.dumps(
            {"events": text.count("\n"), "sessions": args.students, "path": args.out},
            sort_keys=True,
        )
    )
    return 0


def _print_recommendation_table(payload: dict) -> None:
    rec = payload["recommendation"]
    print(f"question {payload['question']}  error rank {payload['rank']}")
    if rec["state"] == "no_coverage":
        print("no full-mark session covers this error; no data-driven path")
        return
    print(f"path length {rec['length']}, stage regressions {rec['regressions']}")
    for i, (slots, stage) in enumerate(zip(rec["path"], rec["stages"])):
        shown = ",".join("-" if v is None else str(v) for v in slots)
        support = "" if i == 0 else f"  support {rec['support'][i - 1]}"
        print(f"  stage {stage}  ({shown}){support}")


def cmd_recommend(args) -> int:
    store = Store(args.store)
    payload = recommendation_payload(store, args.question, args.rank)
    if args.format == "json":
        _emit_json(payload)
    else:
        _print_recommendation_table(payload)
    return 0


def _parse_group_spec(text: str) -> GroupQuery:
    """Comparison group spec: `all` or `scores=0;grades=2,7;student=u7`."""
    if text == "all":
        return GroupQuery()
    grades = scores = None
    student = None
    for clause in text.split(";"):
        if "=" not in clause:
            raise InvalidQuery(f"group clause must be key=values, got {clause!r}")
        key, value = clause.split("=", 1)
        if key == "grades":
            grades = parse_int_set(value, "grades")
        elif key == "scores":
            scores = parse_int_set(value, "scores")
        elif key == "student":
            student = value
        else:
            raise InvalidQuery(f"unknown group key {key!r}")
    return GroupQuery(grades=grades, scores=scores, student=student)


def cmd_export(args) -> int:
    store = Store(args.store)
    manifest = store.get_manifest(args.question)
    sessions = store.load_sessions(args.question)
    errors = common_errors(sessions, manifest, args.top_errors)
    model = build_model(sessions, manifest)
    recommendations = [
        {
            "rank": e.rank,
            "fail_enders": e.fail_enders,
            "recommendation": recommendation_to_dict(recommend(e.answer, model, manifest)),
        }
        for e in errors
    ]
    groups = args.compare or ["all"]
    rows = []
    for spec in groups:
        query = _parse_group_spec(spec)
        subset = group_filter(
            sessions, manifest, grades=query.grades, scores=query.scores, student=query.student
        )
        rows.append(
            {
                "label": spec,
                "query": query.core(),
                "summary": comparison_to_dict(comparison(subset, manifest)),
            }
        )
    payload = {
        "schema": ANALYTICS_SCHEMA,
        "question": args.question,
        "overview": overview_to_dict(overview(sessions, manifest)),
        "errors": [error_to_dict(e) for e in errors],
        "comparison": rows,
        "recommendations": recommendations,
    }
    if args.out:
        Path(args.out).write_bytes(canonical_json_bytes(payload))
        print(f"wrote {args.out}", file=sys.stderr)
    else:
        _emit_json(payload)
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    frontend = Path(args.frontend) if args.frontend else None
    if frontend is None and Path("frontend/dist").is_dir():
        frontend = Path("frontend/dist")
    app = create_app(args.store, frontend_dir=frontend)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qlens",
        description="Analytics over multi-step problem-solving behavior from mouse-event logs.",
    )
    parser.add_argument("--store", default="store", help="store directory (default: ./store)")
    parser.add_argument(
        "--format", choices=("json", "table"), default="table", help="output format"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="load a manifest and an event log into the store")
    p.add_argument("manifest")
    p.add_argument("log")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("report", help="print the composite views for one question")
    p.add_argument("question")
    p.add_argument("--grades")
    p.add_argument("--scores")
    p.add_argument("--student")
    p.add_argument("--min-count", type=int, default=0, dest="min_count")
    p.add_argument("--top-errors", type=int, default=DEFAULT_TOP_ERRORS, dest="top_errors")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("generate", help="write a synthetic event log")
    p.add_argument("manifest")
    p.add_argument("--out", required=True)
    p.add_argument("--students", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--mix", default="0.3,0.5,0.2", help="solution,greedy,walk weights")
    p.add_argument("--grades", default="2:0.5,7:0.5", help="grade:weight pairs")
    p.add_argument("--think-mean", type=float, default=2200.0, dest="think_mean")
    p.add_argument("--think-sd", type=float, default=700.0, dest="think_sd")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("recommend", help="recommended continuation for a ranked error")
    p.add_argument("question")
    p.add_argument("rank", type=int)
    p.set_defaults(func=cmd_recommend)

    p = sub.add_parser("export", help="write the full analytics document")
    p.add_argument("question")
    p.add_argument("--top-errors", type=int, default=DEFAULT_TOP_ERRORS, dest="top_errors")
    p.add_argument("--compare", action="append", help="group spec, e.g. scores=0;grades=2")
    p.add_argument("--out")
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--frontend", help="static bundle directory (default: ./frontend/dist)")
    p.set_defaults(func=cmd_serve)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except QLensError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
