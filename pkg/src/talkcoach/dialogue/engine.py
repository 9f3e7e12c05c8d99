"""Finite-state small-talk engine: intro, three topics, feedback, survey.

One engine instance runs one session. Each turn the caller feeds the NLU
interpretation of the user's input; the engine replies with the next bot line
and state. The feedback phase opens only once the turn budget is met; after
it, a short survey closes the session.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Callable, Optional

from talkcoach.dialogue.budget import TurnBudget
from talkcoach.dialogue.script import DialogueAssets, Prompt, load_assets
from talkcoach.dialogue.states import (
    INTRO_STATES,
    TOPIC_STATES,
    TRANSITIONS,
    DialogueState,
)
from talkcoach.metrics import Thresholds, build_report
from talkcoach.nlu import Intent, Interpretation, Polarity
from talkcoach.types import FeedbackReport, Transcript, Verdict


class EngineStateError(RuntimeError):
    """Raised on contract violations such as advancing an ended session."""


class SlotStore:
    """Named values captured from user answers.

    Write-once-then-overwrite; reading an unset slot yields None (never an
    empty string), and empty values are rejected at the door.
    """

    def __init__(self, initial: dict | None = None):
        self._values: dict[str, str] = {}
        for key, value in (initial or {}).items():
            self.set(key, value)

    def set(self, name: str, value: str) -> None:
        if not name or not str(name).strip():
            raise ValueError("slot name must be non-empty")
        if value is None or not str(value).strip():
            raise ValueError(f"slot {name!r} cannot be set to an empty value")
        self._values[name] = str(value)

    def get(self, name: str) -> Optional[str]:
        return self._values.get(name)

    def as_dict(self) -> dict[str, str]:
        return dict(self._values)

    def __contains__(self, name: str) -> bool:
        return name in self._values


@dataclass(frozen=True)
class TurnPlan:
    """What the bot does next: its line, the state it lands in, side effects."""

    bot_text: str
    next_state: DialogueState
    slots_to_set: tuple[tuple[str, str], ...] = ()
    eligible_for_feedback: bool = False

    def __post_init__(self):
        if self.next_state is not DialogueState.END and not self.bot_text.strip():
            raise ValueError("bot_text must be non-empty unless the session ends")


_WORD_RATINGS = {"one": 1, "two": 2, "three": 3, "four": 4, "five": 5}


def parse_rating(text: str) -> Optional[int]:
    """First 1-5 rating found in the answer, as digit or number word."""
    match = re.search(r"\b([1-5])\b", text)
    if match:
        return int(match.group(1))
    lowered = text.lower()
    for word, value in _WORD_RATINGS.items():
        if re.search(rf"\b{word}\b", lowered):
            return value
    return None


def deliver_feedback(
    report: FeedbackReport, detail: bool, thresholds: Thresholds | None = None
) -> str:
    """Spoken feedback: one advice sentence per metric, plus the numbers on request."""
    th = thresholds or Thresholds()
    sentences = []
    labels = {
        "awkward": "topic transitions",
        "questions": "question asking",
        "pace": "speaking pace",
        "tics": "word variety",
        "acknowledgment": "attention to your partner",
    }
    for name, verdict in report.verdicts().items():
        if verdict.verdict is Verdict.INCONCLUSIVE:
            sentences.append(f"I couldn't compute your {labels[name]} this time.")
        else:
            sentences.append(verdict.advice)
    if detail:
        sentences.append("Here are the underlying numbers.")
        sentences.append(_detail_line_awkward(report, th))
        sentences.append(_detail_line_questions(report, th))
        sentences.append(_detail_line_pace(report, th))
        sentences.append(_detail_line_tics(report, th))
        sentences.append(_detail_line_lsm(report, th))
    return " ".join(sentences)


def _detail_line_awkward(report: FeedbackReport, th: Thresholds) -> str:
    v = report.awkward
    if v.verdict is Verdict.INCONCLUSIVE:
        return "Awkward transitions: not enough data."
    return f"Awkward transitions: {v.value:.0f} (fewer than {th.awkward_max} counts as good)."


def _detail_line_questions(report: FeedbackReport, th: Thresholds) -> str:
    v = report.questions
    if v.verdict is Verdict.INCONCLUSIVE:
        return "Question ratio: not enough data."
    return f"Question ratio: {v.value:.2f} (aim for at least {th.question_ratio_min:g})."


def _detail_line_pace(report: FeedbackReport, th: Thresholds) -> str:
    v = report.pace
    if v.verdict is Verdict.INCONCLUSIVE:
        return "Speaking pace: not enough data."
    return (
        f"Speaking pace: {v.value:.0f} words per minute "
        f"(the comfortable band is {th.wpm_low:g} to {th.wpm_high:g})."
    )


def _detail_line_tics(report: FeedbackReport, th: Thresholds) -> str:
    v = report.tics
    if v.verdict is Verdict.INCONCLUSIVE:
        return "Word variety: not enough data."
    top = ", ".join(f"{token} ({count})" for token, count in v.details[:3])
    return f"Most repeated words: {top or 'none'}."


def _detail_line_lsm(report: FeedbackReport, th: Thresholds) -> str:
    v = report.acknowledgment
    if v.verdict is Verdict.INCONCLUSIVE:
        return "Style matching: not enough data."
    return f"Style matching score: {v.value:.2f} ({th.lsm_min:g} or higher shows close attention)."


class DialogueEngine:
    """Drives one session through the conversation graph.

    The caller owns transcript recording and budget accounting; the engine
    owns state, slots, prompt cursors, and survey bookkeeping.
    """

    def __init__(
        self,
        assets: DialogueAssets | None = None,
        budget: TurnBudget | None = None,
        report_builder: Callable[[], FeedbackReport] | None = None,
        thresholds: Thresholds | None = None,
    ):
        self.assets = assets or load_assets()
        self.budget = budget or TurnBudget()
        self.thresholds = thresholds or Thresholds()
        self._report_builder = report_builder or self._empty_report
        self.state = DialogueState.START
        self.slots = SlotStore()
        self.report: FeedbackReport | None = None
        self.survey_answers: list[tuple[str, str]] = []
        self.rating: Optional[int] = None
        self._cursors: dict[str, int] = {}
        self._outstanding: tuple[str, int] | None = None  # (script key, prompt index)
        self._repeated: set[tuple[str, int]] = set()
        self._rating_retry_used = False
        self._turn_count = 0
        self._eligible = False

    # -- session entry ------------------------------------------------------

    def start_session(self, user_name_hint: str | None = None, registry=None) -> TurnPlan:
        """Open the conversation, greeting returning users by their history."""
        if self.state is not DialogueState.START:
            raise EngineStateError("session already started")
        profile = None
        if registry is not None and user_name_hint:
            profile = registry.lookup(user_name_hint)
        if profile is not None:
            self.state = DialogueState.INTRO_RETURNING
            self.slots.set("user_name", profile.display_name or profile.name)
            script = self.assets.script
            if profile.last_rating is not None:
                clause = script.returning_rating_clause.format(last_rating=profile.last_rating)
            else:
                clause = script.returning_no_rating_clause
            first = self._serve_prompt("intro_returning", extra={"rating_clause": clause})
            return self._plan(first)
        self.state = DialogueState.INTRO_NEW_USER
        if user_name_hint:
            # remember the hint; the intro still confirms it conversationally
            self.slots.set("user_name_hint", user_name_hint)
        return self._plan(self._serve_prompt("intro_new"))

    # -- main turn handler ---------------------------------------------------

    def advance(self, interpretation: Interpretation) -> TurnPlan:
        """Consume one interpreted user turn and produce the next bot turn."""
        if self.state is DialogueState.END:
            raise EngineStateError("cannot advance an ended session")
        if self.state is DialogueState.START:
            raise EngineStateError("session not started")
        self._turn_count += 1

        if self.state is DialogueState.FEEDBACK_DELIVERY:
            return self._advance_feedback_delivery(interpretation)
        if self.state is DialogueState.FEEDBACK_DETAIL:
            return self._enter_survey(prefix=None)
        if self.state is DialogueState.SURVEY:
            return self._advance_survey(interpretation)
        return self._advance_scripted(interpretation)

    # -- scripted intro/topic turns -------------------------------------------

    def _advance_scripted(self, interpretation: Interpretation) -> TurnPlan:
        outstanding = self._outstanding
        prompt = self._prompt_at(*outstanding) if outstanding is not None else None
        repeatable = outstanding is not None and outstanding not in self._repeated and prompt is not None
        captured: list[tuple[str, str]] = []
        parts: list[str] = []

        if interpretation.intent is Intent.UNCLEAR:
            if repeatable:
                self._repeated.add(outstanding)
                text = f"{self.assets.script.clarify} {self._render_prompt(prompt)}"
                return self._plan(text, slots=())
            # repeated confusion: move on rather than loop forever
        elif interpretation.intent is Intent.QUESTION:
            topic_text = interpretation.entities.get("question_topic", "")
            answer = self.persona_answer(topic_text) or self.assets.script.persona_fallback
            captured.extend(self._capture(prompt, interpretation))
            if repeatable:
                self._repeated.add(outstanding)
                text = f"{answer} {self._render_prompt(prompt)}"
                return self._plan(text, slots=tuple(captured))
            parts.append(answer)
        else:
            captured.extend(self._capture(prompt, interpretation))
            parts.append(self._acknowledgment(interpretation))

        plan_text, next_state = self._next_prompt_text(interpretation)
        parts.append(plan_text)
        self.state = next_state
        return self._plan(" ".join(p for p in parts if p), slots=tuple(captured))

    def _capture(self, prompt: Prompt | None, interpretation: Interpretation) -> list[tuple[str, str]]:
        captured = []
        if prompt is not None and prompt.slot:
            value = interpretation.entities.get(prompt.slot)
            if prompt.slot == "user_name" and value is None:
                hint = self.slots.get("user_name_hint")
                value = hint
            if value:
                self.slots.set(prompt.slot, value)
                captured.append((prompt.slot, value))
        return captured

    def _acknowledgment(self, interpretation: Interpretation) -> str:
        acks = self.assets.script.acknowledgments
        if interpretation.polarity is Polarity.NEGATIVE:
            return acks.get("negative", "I'm sorry to hear that.")
        if interpretation.polarity is Polarity.POSITIVE:
            return acks.get("positive", "That's great to hear!")
        neutral = acks.get("neutral") or ["I see."]
        return neutral[self._turn_count % len(neutral)]

    def _next_prompt_text(self, interpretation: Interpretation) -> tuple[str, DialogueState]:
        """Pick the next scripted prompt, honoring bridges, cues, and the budget."""
        if self.state in INTRO_STATES:
            key = self._script_key()
            if self._cursor(key) < len(self._prompts(key)):
                return self._serve_prompt(key), self.state
            bridge = self.assets.script.bridges.get("intro_to_health", "")
            return f"{bridge} {self._serve_prompt('health')}".strip(), DialogueState.HEALTH

        topic = self.state.value
        exhausted = self._cursor(topic) >= len(self._prompts(topic))

        if exhausted and self.budget.met:
            return self._enter_feedback_text(), DialogueState.FEEDBACK_DELIVERY

        if not exhausted:
            jump = self._cue_jump_target(interpretation)
            if jump is not None:
                return self._bridge_to(jump), DialogueState(jump)
            return self._serve_prompt(topic), self.state

        # exhausted, budget not yet met
        target = self._choose_next_topic(interpretation)
        if target is not None:
            return self._bridge_to(target), DialogueState(target)
        return self._serve_followup(), self.state

    def _cue_jump_target(self, interpretation: Interpretation) -> str | None:
        # the movie-location bridge: travel and entertainment reference each other
        pairs = {"travel": "entertainment", "entertainment": "travel"}
        other = pairs.get(self.state.value)
        if other and other in interpretation.topic_cues and self._has_prompts(other):
            return other
        return None

    def _choose_next_topic(self, interpretation: Interpretation) -> str | None:
        if self.state is DialogueState.HEALTH:
            if "travel" in interpretation.topic_cues and self._has_prompts("travel"):
                return "travel"
            if "entertainment" in interpretation.topic_cues and self._has_prompts("entertainment"):
                return "entertainment"
            # fixed tie-break keeps traces deterministic
            for candidate in ("entertainment", "travel"):
                if self._has_prompts(candidate):
                    return candidate
            return None
        other = {"travel": "entertainment", "entertainment": "travel"}[self.state.value]
        return other if self._has_prompts(other) else None

    def _bridge_to(self, topic: str) -> str:
        bridge = self.assets.script.bridges.get(f"{self.state.value}_to_{topic}", "")
        return f"{bridge} {self._serve_prompt(topic)}".strip()

    # -- feedback and survey ---------------------------------------------------

    def _enter_feedback_text(self) -> str:
        self.report = self._report_builder()
        self._eligible = True
        script = self.assets.script
        summary = deliver_feedback(self.report, detail=False, thresholds=self.thresholds)
        return f"{script.bridges.get('to_feedback', '')} {summary} {script.bridges.get('detail_offer', '')}".strip()

    def _advance_feedback_delivery(self, interpretation: Interpretation) -> TurnPlan:
        if interpretation.intent in (Intent.REQUEST_DETAIL, Intent.YES_REPLY):
            self.state = DialogueState.FEEDBACK_DETAIL
            assert self.report is not None
            detail = deliver_feedback(self.report, detail=True, thresholds=self.thresholds)
            close = self.assets.script.bridges.get("detail_close", "")
            return self._plan(f"{detail} {close}".strip())
        return self._enter_survey(prefix=None)

    def _enter_survey(self, prefix: str | None) -> TurnPlan:
        self.state = DialogueState.SURVEY
        intro = self.assets.script.bridges.get("survey_intro", "")
        question = self._serve_prompt("survey")
        text = " ".join(p for p in (prefix, intro, question) if p)
        return self._plan(text)

    def run_survey(self, answers_so_far: list[str]) -> TurnPlan:
        """Next survey turn given the answers already collected."""
        if self.state is not DialogueState.SURVEY:
            raise EngineStateError("run_survey is only valid in the survey state")
        questions = self.assets.script.survey
        idx = len(answers_so_far)
        if idx < len(questions):
            self._cursors["survey"] = idx
            return self._plan(self._serve_prompt("survey"))
        return self._finish()

    def _advance_survey(self, interpretation: Interpretation) -> TurnPlan:
        key, index = self._outstanding if self._outstanding else ("survey", 0)
        questions = self.assets.script.survey
        prompt = questions[index]
        answer_text = self._raw_answer(interpretation)

        if prompt.kind == "rating":
            rating = parse_rating(answer_text)
            if rating is None and not self._rating_retry_used:
                self._rating_retry_used = True
                retry = self.assets.script.bridges.get("rating_retry", "")
                return self._plan(f"{retry} {self._render_prompt(prompt)}".strip())
            self.rating = rating  # may stay None after a failed retry
        self.survey_answers.append((prompt.text, answer_text))
        return self.run_survey([a for _, a in self.survey_answers])

    def _finish(self) -> TurnPlan:
        self.state = DialogueState.END
        name = self.slots.get("user_name")
        clause = f", {name}" if name else ""
        goodbye = self.assets.script.bridges.get("goodbye", "Thanks for the conversation.")
        return self._plan(goodbye.format(name_clause=clause))

    @staticmethod
    def _raw_answer(interpretation: Interpretation) -> str:
        if interpretation.intent is Intent.YES_REPLY:
            base = "yes"
        elif interpretation.intent is Intent.NO_REPLY:
            base = "no"
        elif interpretation.intent is Intent.UNCLEAR:
            return ""
        else:
            base = ""
        freeform = (
            interpretation.entities.get("survey_wrong")
            or interpretation.entities.get("survey_understanding")
            or interpretation.entities.get("survey_rating")
            or interpretation.entities.get("answer_text")
            or ""
        )
        return freeform or base

    # -- persona -----------------------------------------------------------------

    def persona_answer(self, question_topic: str) -> Optional[str]:
        return self.assets.persona.answer(question_topic)

    # -- prompt bookkeeping --------------------------------------------------------

    def _script_key(self) -> str:
        if self.state is DialogueState.INTRO_NEW_USER:
            return "intro_new"
        if self.state is DialogueState.INTRO_RETURNING:
            return "intro_returning"
        return self.state.value

    def _prompts(self, key: str) -> list[Prompt]:
        script = self.assets.script
        if key == "intro_new":
            return script.intro_new
        if key == "intro_returning":
            return script.intro_returning
        if key == "survey":
            return script.survey
        return script.topics[key]

    def _cursor(self, key: str) -> int:
        return self._cursors.get(key, 0)

    def _has_prompts(self, key: str) -> bool:
        return self._cursor(key) < len(self._prompts(key))

    def _prompt_at(self, key: str, index: int) -> Prompt | None:
        prompts = self._prompts(key)
        return prompts[index] if 0 <= index < len(prompts) else None

    def _serve_prompt(self, key: str, extra: dict | None = None) -> str:
        index = self._cursor(key)
        prompt = self._prompt_at(key, index)
        if prompt is None:
            raise EngineStateError(f"no prompt left to serve in {key!r}")
        self._cursors[key] = index + 1
        self._outstanding = (key, index)
        return self._render_prompt(prompt, extra)

    def _serve_followup(self) -> str:
        followups = self.assets.script.followups or ["Tell me more about that."]
        index = self._cursors.get("_followups", 0)
        self._cursors["_followups"] = index + 1
        self._outstanding = None
        return followups[index % len(followups)]

    def _render_prompt(self, prompt: Prompt, extra: dict | None = None) -> str:
        if prompt.kind == "recommendation":
            item = self.assets.catalog.recommend(self.slots.get("favorite_genre"))
            return self.assets.script.recommendation_text.format(item=item.describe())
        values = dict(self.slots.as_dict())
        values.setdefault("user_name", "friend")
        if extra:
            values.update(extra)
        text = prompt.text
        try:
            rendered = text.format(**values)
        except (KeyError, IndexError):
            rendered = prompt.fallback_text or _strip_placeholders(text)
        return rendered

    # -- plumbing -------------------------------------------------------------------

    def _plan(self, bot_text: str, slots: tuple = ()) -> TurnPlan:
        return TurnPlan(
            bot_text=bot_text,
            next_state=self.state,
            slots_to_set=tuple(slots),
            eligible_for_feedback=self._eligible,
        )

    @staticmethod
    def _empty_report() -> FeedbackReport:
        from talkcoach.metrics import load_wordlists

        return build_report(Transcript([]), load_wordlists(), Thresholds())

    @property
    def ended(self) -> bool:
        return self.state is DialogueState.END


_PLACEHOLDER_RE = re.compile(r"\{[a-z_]+\}[,!.]?\s*")


def _strip_placeholders(text: str) -> str:
    cleaned = _PLACEHOLDER_RE.sub("", text)
    return re.sub(r"\s+", " ", cleaned).strip()
