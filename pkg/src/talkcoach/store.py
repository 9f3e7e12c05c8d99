"""Durable session store: user registry, transcripts, reports, surveys.

Layout under the store root:
    registry.json                   user registry (case-folded name keys)
    sessions/<session_id>/          transcript.jsonl, report.json, survey.json

Writes are crash-safe: files go to a temp path then os.replace, and session
directories are renamed into place whole. The registry is guarded by a file
lock so concurrent sessions (or processes) cannot lose updates.
"""

from __future__ import annotations

import json
import os
import shutil
import uuid
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Optional

from filelock import FileLock

from talkcoach.types import FeedbackReport, Transcript

REGISTRY_FILE = "registry.json"
SESSIONS_DIR = "sessions"


@dataclass
class SurveyAnswer:
    question: str
    answer: str
    timestamp: str

    def to_dict(self) -> dict:
        return {"question": self.question, "answer": self.answer, "timestamp": self.timestamp}

    @classmethod
    def from_dict(cls, d: dict) -> "SurveyAnswer":
        return cls(d["question"], d["answer"], d["timestamp"])


@dataclass
class UserProfile:
    """Registry entry keyed by case-folded name (faithful to the name-as-key design)."""

    name: str
    display_name: str = ""
    sessions: list[str] = field(default_factory=list)
    last_rating: Optional[int] = None
    survey_answers: list[SurveyAnswer] = field(default_factory=list)

    def __post_init__(self):
        if not self.name or self.name != self.name.casefold():
            raise ValueError("profile name must be a non-empty case-folded key")
        if self.last_rating is not None and not 1 <= self.last_rating <= 5:
            raise ValueError("last_rating must be in [1, 5]")

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "display_name": self.display_name,
            "sessions": list(self.sessions),
            "last_rating": self.last_rating,
            "survey_answers": [a.to_dict() for a in self.survey_answers],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "UserProfile":
        return cls(
            name=d["name"],
            display_name=d.get("display_name", ""),
            sessions=list(d.get("sessions", [])),
            last_rating=d.get("last_rating"),
            survey_answers=[SurveyAnswer.from_dict(a) for a in d.get("survey_answers", [])],
        )


def _atomic_write_text(path: Path, content: str) -> None:
    tmp = path.with_name(f".tmp-{uuid.uuid4().hex}-{path.name}")
    tmp.write_text(content, encoding="utf-8")
    os.replace(tmp, path)


class UserRegistry:
    """Name-keyed profile store backed by one JSON file plus a writer lock."""

    def __init__(self, store_path: str | Path):
        self.root = Path(store_path)
        self.root.mkdir(parents=True, exist_ok=True)
        (self.root / SESSIONS_DIR).mkdir(exist_ok=True)
        self._registry_path = self.root / REGISTRY_FILE
        self._lock = FileLock(str(self.root / "registry.lock"))
        self._profiles: dict[str, UserProfile] = {}
        self.reload()

    @property
    def store_path(self) -> str:
        return str(self.root)

    def reload(self) -> None:
        if self._registry_path.exists():
            doc = json.loads(self._registry_path.read_text(encoding="utf-8"))
            self._profiles = {
                key: UserProfile.from_dict(entry) for key, entry in doc.get("users", {}).items()
            }
        else:
            self._profiles = {}

    def _save(self) -> None:
        doc = {"users": {key: profile.to_dict() for key, profile in sorted(self._profiles.items())}}
        _atomic_write_text(self._registry_path, json.dumps(doc, indent=2, ensure_ascii=False))

    def lookup(self, name: str) -> Optional[UserProfile]:
        """Case-insensitive exact match; empty strings are never keys."""
        if not name or not name.strip():
            return None
        return self._profiles.get(name.strip().casefold())

    def profiles(self) -> dict[str, UserProfile]:
        return dict(self._profiles)

    def record_session(
        self,
        name: str,
        transcript: Transcript,
        report: FeedbackReport | None,
        survey: list[SurveyAnswer] | None = None,
        rating: Optional[int] = None,
    ) -> str:
        """Persist one finished session and update the user's profile.

        The session directory appears atomically; the registry update runs
        under the file lock against the latest on-disk state, so concurrent
        writers (even across processes) cannot drop each other's profiles.
        """
        if len(transcript) == 0:
            raise ValueError("refusing to record an empty transcript")
        session_id = transcript.session_id or uuid.uuid4().hex[:12]
        sessions_root = self.root / SESSIONS_DIR
        final_dir = sessions_root / session_id
        if final_dir.exists():
            session_id = f"{session_id}-{uuid.uuid4().hex[:6]}"
            final_dir = sessions_root / session_id

        staging = sessions_root / f".tmp-{uuid.uuid4().hex}"
        staging.mkdir()
        try:
            (staging / "transcript.jsonl").write_text(transcript.to_jsonl(), encoding="utf-8")
            if report is not None:
                (staging / "report.json").write_text(report.to_json(), encoding="utf-8")
            survey_doc = {
                "rating": rating,
                "answers": [a.to_dict() for a in (survey or [])],
            }
            (staging / "survey.json").write_text(
                json.dumps(survey_doc, indent=2, ensure_ascii=False), encoding="utf-8"
            )
            os.replace(staging, final_dir)
        except Exception:
            shutil.rmtree(staging, ignore_errors=True)
            raise

        key = (name or "anonymous").strip().casefold() or "anonymous"
        with self._lock:
            self.reload()
            profile = self._profiles.get(key)
            if profile is None:
                profile = UserProfile(name=key, display_name=(name or "").strip())
                self._profiles[key] = profile
            profile.sessions.append(session_id)
            if rating is not None:
                profile.last_rating = rating
            profile.survey_answers.extend(survey or [])
            self._save()
        return session_id

    def session_dir(self, session_id: str) -> Path:
        return self.root / SESSIONS_DIR / session_id

    def load_report(self, session_id: str) -> Optional[FeedbackReport]:
        path = self.session_dir(session_id) / "report.json"
        if not path.exists():
            return None
        return FeedbackReport.from_json(path.read_text(encoding="utf-8"))


def survey_answers_from_pairs(pairs: list[tuple[str, str]]) -> list[SurveyAnswer]:
    now = datetime.now(timezone.utc).isoformat()
    return [SurveyAnswer(question=q, answer=a, timestamp=now) for q, a in pairs]
