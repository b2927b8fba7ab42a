"""Record service payloads for the frontend snapshot tests.

Builds two deterministic stores (a 30-student synthetic cohort and a
single worked session), then saves the exact response bytes of the
endpoints the UI consumes. Rerun after any payload-shaping change:

    python3 frontend/scripts/record_fixtures.py
"""

from __future__ import annotations

import json
import tempfile
from pathlib import Path

from fastapi.testclient import TestClient

from qlens.manifest import QuestionManifest, load_manifest
from qlens.service import create_app
from qlens.store import Store
from qlens.synth import SynthConfig, generate_log

ROOT = Path(__file__).resolve().parents[2]
FIXTURES = Path(__file__).resolve().parents[1] / "tests" / "fixtures"

# source ROI for element e is roi 6+e; slot ROI for slot s is roi s
WORKED_PAIRS = [(12, 1), (11, 4), (10, 2), (9, 3), (8, 5), (7, 6)]


def worked_log(manifest: QuestionManifest, session: str, student: str, grade: int) -> str:
    lines = []
    t = 1000
    for src_id, dst_id in WORKED_PAIRS:
        (ax, ay) = manifest.roi(src_id).center()
        (bx, by) = manifest.roi(dst_id).center()
        for kind, x, y, dt in (
            ("down", ax, ay, 0),
            ("move", (ax + bx) // 2, (ay + by) // 2, 20),
            ("move", bx, by, 40),
            ("up", bx, by, 60),
        ):
            lines.append(
                json.dumps(
                    {
                        "session": session,
                        "student": student,
                        "question": manifest.question_id,
                        "grade": grade,
                        "t": t + dt,
                        "x": x,
                        "y": y,
                        "kind": kind,
                    },
                    sort_keys=True,
                    separators=(",", ":"),
                )
            )
        t += 1000
    return "\n".join(lines) + "\n"


def record(client: TestClient, path: str, name: str) -> None:
    response = client.get(path)
    assert response.status_code == 200, (path, response.status_code, response.text)
    (FIXTURES / name).write_bytes(response.content)
    print(f"{name}: {len(response.content)} bytes")


def main() -> None:
    FIXTURES.mkdir(parents=True, exist_ok=True)
    manifest = load_manifest(ROOT / "sample" / "question.json")

    with tempfile.TemporaryDirectory() as tmp:
        cohort_root = Path(tmp) / "cohort"
        Store(cohort_root).put_manifest(manifest)
        body = generate_log(manifest, SynthConfig(student_count=30, seed=8)) + worked_log(
            manifest, session="w1", student="w1", grade=7
        )
        with TestClient(create_app(cohort_root)) as client:
            assert client.post("/api/questions/q-order/ingest", content=body).status_code == 200
            record(client, "/api/questions", "questions.json")
            record(client, "/api/questions/q-order/views", "views.json")
            record(
                client,
                "/api/questions/q-order/views?grades=2&min_count=1",
                "views_filtered.json",
            )
            record(client, "/api/questions/q-order/errors/1/recommendation", "recommendation.json")

        worked_root = Path(tmp) / "worked"
        Store(worked_root).put_manifest(manifest)
        with TestClient(create_app(worked_root)) as client:
            assert (
                client.post(
                    "/api/questions/q-order/ingest",
                    content=worked_log(manifest, session="s1", student="u1", grade=2),
                ).status_code
                == 200
            )
            record(client, "/api/questions/q-order/views", "views_worked.json")


if __name__ == "__main__":
    main()
