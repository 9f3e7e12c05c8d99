"""Core conversation records: speakers, utterances, transcripts, and reports.

These are immutable value types shared by every other module. The transcript
file format is UTF-8 JSON-lines (one utterance object per line, keys
``speaker``/``text``/``start_ms``/``end_ms``), optionally preceded by a single
header line carrying the session id. Reports serialize to a single JSON
document mirroring :class:`FeedbackReport`.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from datetime import datetime, timezone
from enum import Enum
from typing import Iterable, Sequence


class Speaker(Enum):
    USER = "user"
    BOT = "bot"


class Verdict(Enum):
    GOOD = "good"
    NEEDS_WORK = "needs_work"
    INCONCLUSIVE = "inconclusive"


class TranscriptFormatError(ValueError):
    """Raised when a transcript file or record cannot be parsed.

    Carries the 1-based ``line`` number when the error came from a file.
    """

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class Utterance:
    """One contiguous speaker turn with millisecond time bounds.

    Bot turns may carry empty text (placeholder turns); user turns never do.
    """

    speaker: Speaker
    text: str
    start_ms: int
    end_ms: int

    def __post_init__(self):
        if self.start_ms < 0:
            raise ValueError(f"start_ms must be >= 0, got {self.start_ms}")
        if self.end_ms < self.start_ms:
            raise ValueError(
                f"end_ms ({self.end_ms}) must be >= start_ms ({self.start_ms})"
            )
        if self.speaker is Speaker.USER and not self.text.strip():
            raise ValueError("user utterances must have non-empty text")

    @property
    def duration_ms(self) -> int:
        return self.end_ms - self.start_ms

    def to_dict(self) -> dict:
        return {
            "speaker": self.speaker.value,
            "text": self.text,
            "start_ms": self.start_ms,
            "end_ms": self.end_ms,
        }

    @classmethod
    def from_dict(cls, record: dict) -> "Utterance":
        try:
            speaker = Speaker(record["speaker"])
            text = record["text"]
            start_ms = record["start_ms"]
            end_ms = record["end_ms"]
        except (KeyError, ValueError) as exc:
            raise TranscriptFormatError(f"bad utterance record: {exc}") from exc
        if not isinstance(text, str) or not isinstance(start_ms, int) or not isinstance(end_ms, int):
            raise TranscriptFormatError("bad utterance record: wrong field types")
        return cls(speaker=speaker, text=text, start_ms=start_ms, end_ms=end_ms)


@dataclass(frozen=True)
class Transcript:
    """Ordered, non-overlapping utterances for one conversation session.

    Utterances are canonically sorted by ``start_ms`` on construction;
    simultaneous zero-length turns are tie-broken by end time, speaker, and
    text so the canonical order is permutation-independent.
    """

    utterances: tuple[Utterance, ...]
    session_id: str = "session"

    def __init__(self, utterances: Iterable[Utterance] = (), session_id: str = "session"):
        ordered = tuple(
            sorted(utterances, key=lambda u: (u.start_ms, u.end_ms, u.speaker.value, u.text))
        )
        for prev, nxt in zip(ordered, ordered[1:]):
            if nxt.start_ms < prev.end_ms:
                raise ValueError(
                    f"overlapping utterances at {prev.end_ms}ms/{nxt.start_ms}ms"
                )
        object.__setattr__(self, "utterances", ordered)
        object.__setattr__(self, "session_id", session_id)

    def __len__(self) -> int:
        return len(self.utterances)

    def __iter__(self):
        return iter(self.utterances)

    def by_speaker(self, speaker: Speaker) -> list[Utterance]:
        return [u for u in self.utterances if u.speaker is speaker]

    def to_jsonl(self, include_header: bool = True) -> str:
        lines = []
        if include_header:
            lines.append(json.dumps({"session_id": self.session_id}))
        lines.extend(json.dumps(u.to_dict(), ensure_ascii=False) for u in self.utterances)
        return "\n".join(lines) + ("\n" if lines else "")

    @classmethod
    def from_jsonl(cls, text: str, session_id: str | None = None) -> "Transcript":
        """Parse the line-oriented transcript format.

        An optional first line ``{"session_id": ...}`` names the session;
        otherwise the caller-supplied ``session_id`` (or a default) is used.
        Raises :class:`TranscriptFormatError` with the offending line number
        on malformed input.
        """
        utterances: list[Utterance] = []
        parsed_session = session_id
        # Split on real newlines only; splitlines() would also break on
        # unicode separators that may legitimately appear inside text fields.
        for lineno, raw in enumerate(text.split("\n"), start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise TranscriptFormatError(f"not valid JSON ({exc.msg})", line=lineno) from exc
            if not isinstance(record, dict):
                raise TranscriptFormatError("record is not an object", line=lineno)
            if "speaker" not in record and "session_id" in record:
                if lineno == 1 or not utterances:
                    parsed_session = str(record["session_id"])
                    continue
                raise TranscriptFormatError("header after utterance records", line=lineno)
            try:
                utterances.append(Utterance.from_dict(record))
            except (TranscriptFormatError, ValueError) as exc:
                raise TranscriptFormatError(str(exc), line=lineno) from exc
        try:
            return cls(utterances, session_id=parsed_session or "session")
        except ValueError as exc:
            raise TranscriptFormatError(str(exc)) from exc


@dataclass(frozen=True)
class MetricVerdict:
    """Outcome of one conversational metric.

    ``details`` holds (token-or-label, count) pairs whose meaning depends on
    the metric (matched phrases, token frequencies, category masses...).
    ``advice`` is always a full sentence; it must be non-empty on NEEDS_WORK.
    """

    metric_name: str
    value: float
    verdict: Verdict
    advice: str
    details: tuple[tuple[str, int], ...] = ()

    def __post_init__(self):
        if self.verdict is Verdict.NEEDS_WORK and not self.advice.strip():
            raise ValueError("needs_work verdicts must carry advice")
        object.__setattr__(self, "details", tuple((str(k), int(v)) for k, v in self.details))

    def to_dict(self) -> dict:
        return {
            "metric_name": self.metric_name,
            "value": self.value,
            "verdict": self.verdict.value,
            "advice": self.advice,
            "details": [[k, v] for k, v in self.details],
        }

    @classmethod
    def from_dict(cls, record: dict) -> "MetricVerdict":
        return cls(
            metric_name=record["metric_name"],
            value=float(record["value"]),
            verdict=Verdict(record["verdict"]),
            advice=record["advice"],
            details=tuple((k, v) for k, v in record.get("details", [])),
        )


REPORT_METRIC_FIELDS = ("awkward", "questions", "pace", "tics", "acknowledgment")


@dataclass(frozen=True)
class FeedbackReport:
    """The five metric verdicts for one session, always all present."""

    awkward: MetricVerdict
    questions: MetricVerdict
    pace: MetricVerdict
    tics: MetricVerdict
    acknowledgment: MetricVerdict
    generated_at: datetime = field(default_factory=lambda: datetime.now(timezone.utc))

    def verdicts(self) -> dict[str, MetricVerdict]:
        return {name: getattr(self, name) for name in REPORT_METRIC_FIELDS}

    def to_dict(self) -> dict:
        doc = {name: verdict.to_dict() for name, verdict in self.verdicts().items()}
        doc["generated_at"] = self.generated_at.isoformat()
        return doc

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent, ensure_ascii=False)

    @classmethod
    def from_dict(cls, doc: dict) -> "FeedbackReport":
        return cls(
            generated_at=datetime.fromisoformat(doc["generated_at"]),
            **{name: MetricVerdict.from_dict(doc[name]) for name in REPORT_METRIC_FIELDS},
        )

    @classmethod
    def from_json(cls, text: str) -> "FeedbackReport":
        return cls.from_dict(json.loads(text))


def load_transcript(path) -> Transcript:
    """Read a transcript file, defaulting the session id to the file stem."""
    from pathlib import Path

    p = Path(path)
    return Transcript.from_jsonl(p.read_text(encoding="utf-8"), session_id=p.stem)


def save_transcript(transcript: Transcript, path) -> None:
    from pathlib import Path

    Path(path).write_text(transcript.to_jsonl(), encoding="utf-8")
