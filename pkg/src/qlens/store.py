"""File-backed store for manifests, sessions, and cached model payloads.

Layout: ``<root>/questions/<qid>/manifest.json``, ``.../sessions/<sid>.json``,
``.../models/<group-hash>.json``. Writes go through a temp file and an
atomic rename so readers never observe partial documents.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from pathlib import Path
from typing import Optional
from urllib.parse import quote, unquote

from .answers import answer_to_list
from .errors import StoreUnavailable, UnknownQuestion
from .ingest import Session, Step
from .manifest import QuestionManifest, load_manifest, manifest_to_dict
from .serialize import canonical_json_bytes

SESSION_SCHEMA = "qlens-session/1"


def _safe_name(raw: str) -> str:
    return quote(raw, safe="")


def _atomic_write(path: Path, data: bytes) -> None:
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as handle:
            handle.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def group_hash(core: dict) -> str:
    """Deterministic name for a filter predicate's cached model."""
    return hashlib.sha256(canonical_json_bytes(core)).hexdigest()[:16]


def session_to_dict(session: Session) -> dict:
    return {
        "schema": SESSION_SCHEMA,
        "session": session.session_id,
        "student": session.student_id,
        "question": session.question_id,
        "grade": session.grade,
        "total_time_ms": session.total_time_ms,
        "total_traj_px": session.total_traj_px,
        "final_answer": answer_to_list(session.final_answer),
        "steps": [
            {
                "index": s.index,
                "slots": answer_to_list(s.answer),
                "time_elapse_ms": s.time_elapse_ms,
                "traj_len_px": s.traj_len_px,
            }
            for s in session.steps
        ],
    }


def session_from_dict(data: dict) -> Session:
    steps = tuple(
        Step(
            index=s["index"],
            answer=tuple(s["slots"]),
            time_elapse_ms=s["time_elapse_ms"],
            traj_len_px=s["traj_len_px"],
        )
        for s in data["steps"]
    )
    return Session(
        session_id=data["session"],
        student_id=data["student"],
        question_id=data["question"],
        grade=data["grade"],
        steps=steps,
        total_time_ms=data["total_time_ms"],
        total_traj_px=data["total_traj_px"],
        final_answer=tuple(data["final_answer"]),
    )


class Store:
    """One directory tree holding everything the service serves."""

    def __init__(self, root):
        self.root = Path(root)
        if self.root.exists() and not self.root.is_dir():
            raise StoreUnavailable(f"store root {self.root} is not a directory")
        try:
            (self.root / "questions").mkdir(parents=True, exist_ok=True)
        except OSError as exc:
            raise StoreUnavailable(f"cannot initialize store at {self.root}: {exc}") from exc
        self._manifests: dict[str, QuestionManifest] = {}

    def _question_dir(self, question_id: str, must_exist: bool = True) -> Path:
        path = self.root / "questions" / _safe_name(question_id)
        if must_exist and not (path / "manifest.json").is_file():
            raise UnknownQuestion(f"no manifest stored for question {question_id!r}")
        return path

    def put_manifest(self, manifest: QuestionManifest) -> None:
        qdir = self._question_dir(manifest.question_id, must_exist=False)
        qdir.mkdir(parents=True, exist_ok=True)
        (qdir / "sessions").mkdir(exist_ok=True)
        (qdir / "models").mkdir(exist_ok=True)
        _atomic_write(qdir / "manifest.json", canonical_json_bytes(manifest_to_dict(manifest)))
        self._manifests.pop(manifest.question_id, None)

    def get_manifest(self, question_id: str) -> QuestionManifest:
        cached = self._manifests.get(question_id)
        if cached is not None:
            return cached
        qdir = self._question_dir(question_id)
        manifest = load_manifest(json.loads((qdir / "manifest.json").read_text(encoding="utf-8")))
        self._manifests[question_id] = manifest
        return manifest

    def question_ids(self) -> list[str]:
        base = self.root / "questions"
        ids = []
        for entry in sorted(base.iterdir()) if base.is_dir() else []:
            if (entry / "manifest.json").is_file():
                ids.append(unquote(entry.name))
        return ids

    def add_sessions(self, question_id: str, sessions: list[Session]) -> tuple[int, int]:
        """Persist sessions, overwriting same-id ones. Returns (added, replaced)."""
        qdir = self._question_dir(question_id)
        sdir = qdir / "sessions"
        added = 0
        replaced = 0
        for session in sessions:
            path = sdir / (_safe_name(session.session_id) + ".json")
            if path.exists():
                replaced += 1
            else:
                added += 1
            _atomic_write(path, canonical_json_bytes(session_to_dict(session)))
        return added, replaced

    def load_sessions(self, question_id: str) -> list[Session]:
        """All stored sessions for a question, ordered by session id."""
        sdir = self._question_dir(question_id) / "sessions"
        sessions = []
        for path in sorted(sdir.glob("*.json")) if sdir.is_dir() else []:
            sessions.append(session_from_dict(json.loads(path.read_text(encoding="utf-8"))))
        sessions.sort(key=lambda s: s.session_id)
        return sessions

    def student_count(self, question_id: str) -> int:
        return len({s.student_id for s in self.load_sessions(question_id)})

    def get_model_bytes(self, question_id: str, core: dict) -> Optional[bytes]:
        path = self._question_dir(question_id) / "models" / (group_hash(core) + ".json")
        return path.read_bytes() if path.is_file() else None

    def put_model_bytes(self, question_id: str, core: dict, payload: bytes) -> None:
        mdir = self._question_dir(question_id) / "models"
        mdir.mkdir(exist_ok=True)
        _atomic_write(mdir / (group_hash(core) + ".json"), payload)

    def invalidate_models(self, question_id: str) -> None:
        mdir = self._question_dir(question_id) / "models"
        if mdir.is_dir():
            for path in mdir.glob("*.json"):
                path.unlink()
