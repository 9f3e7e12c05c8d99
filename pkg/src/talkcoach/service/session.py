"""One live conversation session: ports, transcript clock, and persistence.

Shared by the HTTP API and the terminal client. A session is strictly
sequential: callers must not overlap turns (the HTTP layer enforces this
with a non-blocking lock and 409s).
"""

from __future__ import annotations

import threading
import uuid
from dataclasses import dataclass

from talkcoach.config import AppConfig
from talkcoach.dialogue import DialogueEngine, DialogueState, TurnBudget
from talkcoach.metrics import build_report
from talkcoach.nlu import Interpreter
from talkcoach.speech import (
    AudioRef,
    StubTranscriber,
    Synthesizer,
    TranscribeError,
    Transcriber,
    estimate_speech_ms,
)
from talkcoach.store import UserRegistry, survey_answers_from_pairs
from talkcoach.types import FeedbackReport, Speaker, Transcript, Utterance


@dataclass(frozen=True)
class TurnOutcome:
    bot_text: str
    state: str
    done: bool
    bot_audio_ref: str | None = None


class SessionEndedError(RuntimeError):
    pass


class ConversationSession:
    def __init__(
        self,
        config: AppConfig,
        interpreter: Interpreter,
        registry: UserRegistry,
        transcriber: Transcriber | None = None,
        synthesizer: Synthesizer | None = None,
        name_hint: str | None = None,
        session_id: str | None = None,
    ):
        self.id = session_id or uuid.uuid4().hex[:12]
        self.config = config
        self.interpreter = interpreter
        self.registry = registry
        self.transcriber = transcriber or StubTranscriber()
        self.synthesizer = synthesizer
        self.utterances: list[Utterance] = []
        self.clock_ms = 0
        self.state_trace: list[str] = []
        self.done = False
        self.persisted_session_id: str | None = None
        self._turn_lock = threading.Lock()
        budget = TurnBudget(
            min_user_turns=config.min_user_turns, min_elapsed_ms=config.min_elapsed_ms
        )
        self.engine = DialogueEngine(
            assets=config.assets,
            budget=budget,
            report_builder=self._report_now,
            thresholds=config.thresholds,
        )
        plan = self.engine.start_session(name_hint, registry)
        self._record_state(plan.next_state)
        self.greeting = plan.bot_text
        self._append_bot(plan.bot_text)

    # -- public surface ------------------------------------------------------

    @property
    def state(self) -> str:
        return self.engine.state.value

    @property
    def report(self) -> FeedbackReport | None:
        return self.engine.report

    def transcript(self) -> Transcript:
        return Transcript(self.utterances, session_id=self.id)

    def try_acquire(self) -> bool:
        return self._turn_lock.acquire(blocking=False)

    def release(self) -> None:
        self._turn_lock.release()

    def turn(
        self,
        text: str | None = None,
        audio_ref: str | None = None,
        duration_ms: int | None = None,
    ) -> TurnOutcome:
        """Run one user turn through transcription, understanding, and the engine."""
        if self.done:
            raise SessionEndedError(self.id)

        if audio_ref is not None:
            try:
                text, measured = self.transcriber.transcribe(AudioRef.for_path(audio_ref))
            except TranscribeError:
                # unreadable audio degrades to an unclear turn; the engine re-prompts
                text, measured = "", 0
            duration = duration_ms if duration_ms is not None else measured
        else:
            text = text or ""
            duration = duration_ms if duration_ms is not None else estimate_speech_ms(text)

        if text.strip():
            self._append_user(text, max(0, duration))

        expected = self._expected_slots()
        interpretation = self.interpreter.interpret(text, expected=expected)
        plan = self.engine.advance(interpretation)
        self._record_state(plan.next_state)

        bot_ref = None
        if plan.bot_text.strip():
            if self.synthesizer is not None:
                ref = self.synthesizer.synthesize(plan.bot_text)
                bot_ref = ref.path
                self._append_bot(plan.bot_text, ref.duration_ms)
            else:
                self._append_bot(plan.bot_text)

        if self.engine.ended:
            self.done = True
            self._persist()
        return TurnOutcome(
            bot_text=plan.bot_text, state=self.state, done=self.done, bot_audio_ref=bot_ref
        )

    # -- internals -------------------------------------------------------------

    def _expected_slots(self) -> list[str]:
        outstanding = self.engine._outstanding
        if outstanding is None:
            return []
        prompt = self.engine._prompt_at(*outstanding)
        return [prompt.slot] if prompt and prompt.slot else []

    def _report_now(self) -> FeedbackReport:
        return build_report(self.transcript(), self.config.wordlists, self.config.thresholds)

    def _append_user(self, text: str, duration_ms: int) -> None:
        start = self.clock_ms
        self.utterances.append(Utterance(Speaker.USER, text, start, start + duration_ms))
        self.clock_ms = start + duration_ms
        self.engine.budget.record_user_turn(duration_ms)

    def _append_bot(self, text: str, duration_ms: int | None = None) -> None:
        duration = duration_ms if duration_ms is not None else estimate_speech_ms(text)
        start = self.clock_ms
        self.utterances.append(Utterance(Speaker.BOT, text, start, start + duration))
        self.clock_ms = start + duration
        self.engine.budget.add_elapsed(duration)

    def _record_state(self, state: DialogueState) -> None:
        if not self.state_trace or self.state_trace[-1] != state.value:
            self.state_trace.append(state.value)

    def _persist(self) -> None:
        name = (
            self.engine.slots.get("user_name")
            or self.engine.slots.get("user_name_hint")
            or "anonymous"
        )
        self.persisted_session_id = self.registry.record_session(
            name=name,
            transcript=self.transcript(),
            report=self.engine.report,
            survey=survey_answers_from_pairs(self.engine.survey_answers),
            rating=self.engine.rating,
        )
