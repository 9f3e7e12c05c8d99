"""Speech ports: transcription and synthesis behind swappable providers.

The offline stubs make the whole pipeline deterministic: transcription reads
sidecar text files and WAV durations come from PCM header arithmetic (no
decoder involved); synthesis writes text files with a nominal-pace duration
estimate. Recording control belongs to clients; these ports only consume
finished audio.
"""

from __future__ import annotations

import logging
import os
import struct
import wave
from dataclasses import dataclass
from pathlib import Path
from typing import Protocol

from talkcoach.metrics.tokenizer import tokenize
from talkcoach.nlu import missing_env

logger = logging.getLogger(__name__)

FORMAT_WAV = "wav16-mono-44100"
FORMAT_MP3 = "mp3"
FORMAT_TEXT_STUB = "text-stub"

# Stub synthesis pace: 2.5 tokens per second (150 words per minute).
STUB_TOKENS_PER_SECOND = 2.5


class TranscribeError(Exception):
    """Recoverable transcription failure; the engine turns it into a re-prompt."""


@dataclass(frozen=True)
class AudioRef:
    """Reference to a finished piece of audio (or a text stand-in)."""

    path: str
    format: str = FORMAT_WAV
    duration_ms: int = 0

    @classmethod
    def for_path(cls, path: str, duration_ms: int = 0) -> "AudioRef":
        suffix = Path(path).suffix.lower()
        fmt = {".wav": FORMAT_WAV, ".mp3": FORMAT_MP3}.get(suffix, FORMAT_TEXT_STUB)
        return cls(path=path, format=fmt, duration_ms=duration_ms)


class Transcriber(Protocol):
    def transcribe(self, audio: AudioRef) -> tuple[str, int]: ...


class Synthesizer(Protocol):
    def synthesize(self, text: str) -> AudioRef: ...


def wav_duration_ms(path: str | Path) -> int:
    """Duration from WAV header fields only: round(1000 * frames / rate)."""
    try:
        with wave.open(str(path), "rb") as wav:
            frames = wav.getnframes()
            rate = wav.getframerate()
    except (wave.Error, EOFError, OSError, struct.error) as exc:
        raise TranscribeError(f"unreadable wav file {path}: {exc}") from exc
    if rate <= 0:
        raise TranscribeError(f"wav file {path} declares a zero sample rate")
    return round(1000 * frames / rate)


def parse_sidecar(text: str) -> tuple[str, int | None]:
    """Split a stub transcript file into (transcript, declared duration).

    Format: an optional first line ``duration_ms: N`` followed by the
    transcript text.
    """
    lines = text.split("\n")
    duration: int | None = None
    if lines and lines[0].strip().lower().startswith("duration_ms:"):
        raw = lines[0].split(":", 1)[1].strip()
        try:
            duration = int(raw)
        except ValueError:
            duration = None
        lines = lines[1:]
    return "\n".join(lines).strip(), duration


class StubTranscriber:
    """Offline transcriber reading sidecar text next to the audio path.

    For text-stub refs the referenced file itself is the sidecar; for WAV
    refs the transcript lives at ``<path>.txt`` and the duration comes from
    header arithmetic.
    """

    def transcribe(self, audio: AudioRef) -> tuple[str, int]:
        path = Path(audio.path)
        if audio.format == FORMAT_WAV:
            duration = wav_duration_ms(path)
            sidecar = path.with_name(path.name + ".txt")
            text = ""
            if sidecar.exists():
                text, declared = parse_sidecar(sidecar.read_text(encoding="utf-8"))
                if declared is not None:
                    duration = declared
            return text, duration
        if not path.exists():
            raise TranscribeError(f"audio stub not found: {path}")
        text, declared = parse_sidecar(path.read_text(encoding="utf-8"))
        duration = declared if declared is not None else audio.duration_ms
        return text, duration


class StubSynthesizer:
    """Writes bot lines to text files and estimates duration at nominal pace."""

    def __init__(self, out_dir: str | Path):
        self.out_dir = Path(out_dir)
        self.out_dir.mkdir(parents=True, exist_ok=True)
        self._counter = 0

    def synthesize(self, text: str) -> AudioRef:
        if not text or not text.strip():
            raise ValueError("cannot synthesize empty text")
        self._counter += 1
        path = self.out_dir / f"bot-{self._counter:04d}.txt"
        duration = estimate_speech_ms(text)
        path.write_text(f"duration_ms: {duration}\n{text}", encoding="utf-8")
        return AudioRef(path=str(path), format=FORMAT_TEXT_STUB, duration_ms=duration)


def estimate_speech_ms(text: str) -> int:
    return round(len(tokenize(text)) / STUB_TOKENS_PER_SECOND * 1000)


class RemoteTranscriber:
    """ASR over an OpenAI-style audio transcription endpoint.

    Requires TALKCOACH_ASR_BASE_URL and TALKCOACH_ASR_API_KEY. The measured
    duration still comes from local header math for WAV input.
    """

    ENV_VARS = ("TALKCOACH_ASR_BASE_URL", "TALKCOACH_ASR_API_KEY")

    def __init__(self, model: str = "whisper-1", timeout_s: float = 30.0, transport=None):
        missing = missing_env(self.ENV_VARS)
        if missing:
            raise RuntimeError(
                "remote ASR provider needs environment variables: " + ", ".join(missing)
            )
        self.base_url = os.environ["TALKCOACH_ASR_BASE_URL"].rstrip("/")
        self.api_key = os.environ["TALKCOACH_ASR_API_KEY"]
        self.model = model
        self.timeout_s = timeout_s
        self._transport = transport

    def transcribe(self, audio: AudioRef) -> tuple[str, int]:
        import httpx

        path = Path(audio.path)
        if not path.exists():
            raise TranscribeError(f"audio file not found: {path}")
        duration = wav_duration_ms(path) if audio.format == FORMAT_WAV else audio.duration_ms
        client_kwargs = {"timeout": self.timeout_s}
        if self._transport is not None:
            client_kwargs["transport"] = self._transport
        try:
            with httpx.Client(**client_kwargs) as client:
                response = client.post(
                    f"{self.base_url}/audio/transcriptions",
                    headers={"Authorization": f"Bearer {self.api_key}"},
                    data={"model": self.model},
                    files={"file": (path.name, path.read_bytes())},
                )
            response.raise_for_status()
            text = response.json().get("text", "")
        except Exception as exc:
            raise TranscribeError(f"remote transcription failed: {exc}") from exc
        logger.debug("remote ASR transcript: %r", text[:200])
        return text, duration


def write_wav_fixture(path: str | Path, frames: int, rate: int = 44100) -> None:
    """Write a silent 16-bit mono PCM WAV with exactly ``frames`` frames."""
    with wave.open(str(path), "wb") as wav:
        wav.setnchannels(1)
        wav.setsampwidth(2)
        wav.setframerate(rate)
        wav.writeframes(b"\x00\x00" * frames)
