"""Understanding port: intent, polarity, entity, and topic-cue extraction.

The default provider is rule-based, offline, and deterministic so the whole
system runs without API keys. A remote LLM adapter implementing the same
contract can be swapped in; on timeout or transport failure it falls back to
the rule-based result and logs the downgrade.
"""

from __future__ import annotations

import json
import logging
import os
import re
import threading
from dataclasses import dataclass, field
from enum import Enum
from importlib import resources
from typing import Iterable, Protocol

from talkcoach.metrics.tokenizer import tokenize

logger = logging.getLogger(__name__)

MAX_INPUT_CHARS = 10_000


class Intent(Enum):
    ANSWER = "answer"
    QUESTION = "question"
    YES_REPLY = "yes_reply"
    NO_REPLY = "no_reply"
    REQUEST_DETAIL = "request_detail"
    UNCLEAR = "unclear"


class Polarity(Enum):
    POSITIVE = "positive"
    NEGATIVE = "negative"
    NEUTRAL = "neutral"


@dataclass(frozen=True)
class Interpretation:
    intent: Intent
    polarity: Polarity = Polarity.NEUTRAL
    entities: dict = field(default_factory=dict)
    topic_cues: frozenset = frozenset()

    def __post_init__(self):
        if self.intent is Intent.UNCLEAR and self.entities:
            raise ValueError("unclear interpretations carry no entities")


class Interpreter(Protocol):
    def interpret(self, text: str, expected: list[str] | None = None) -> Interpretation: ...


_YES_WORDS = frozenset(
    "yes yeah yep yup sure absolutely definitely certainly totally ok okay indeed gladly".split()
)
_NO_WORDS = frozenset("no nope nah never".split())
_NO_PHRASES = ("not really", "i don't", "i do not", "no thanks", "no thank you", "i'd rather not")
_DETAIL_WORDS = frozenset("details detail metrics statistics stats numbers specifics breakdown".split())
_WH_WORDS = frozenset("who what when where why which whose whom how".split())
_AUX_OPENERS = frozenset("do does did am is are was were can could will would shall should have has".split())

_POSITIVE_WORDS = frozenset(
    "great good love loved awesome amazing fantastic wonderful happy glad fun enjoy enjoyed "
    "excited nice excellent perfect best favorite beautiful".split()
)
_NEGATIVE_WORDS = frozenset(
    "bad sad terrible awful hate hated horrible angry upset stressed anxious tired sick lonely "
    "depressed crying cried worst miserable hard difficult".split()
)

_TOPIC_LEXICONS = {
    "travel": frozenset(
        "travel traveling travelling trip trips vacation holiday abroad flight flights country "
        "countries city cities visit visiting beach mountains destination destinations tourist "
        "passport hometown austria barcelona".split()
    ),
    "entertainment": frozenset(
        "movie movies film films cinema music song songs album band artist actor actress show "
        "shows series genre concert netflix soundtrack character".split()
    ),
    "health": frozenset(
        "health healthy gym workout workouts exercise exercising diet eating food sleep running "
        "yoga fitness routine balance wellness".split()
    ),
}

_FREQUENCY_TERMS = (
    "every day",
    "every week",
    "every morning",
    "daily",
    "weekly",
    "monthly",
    "regularly",
    "often",
    "sometimes",
    "occasionally",
    "rarely",
    "never",
)

# Leading acknowledgements stripped before using a clause as a slot value.
_LEAD_FILLER = re.compile(
    r"^(?:yes|yeah|yep|no|nope|nah|well|um|uh|hmm|okay|ok|sure|honestly|i mean|i think|i guess)[,!. ]+",
    re.IGNORECASE,
)

_NAME_BLOCKLIST = frozenset(
    "not no yes fine good well ok okay nothing nobody none sorry why what who maybe "
    "anonymous me you he she they it".split()
)
_NAME_PATTERNS = (
    re.compile(r"\bmy name is ([a-z][a-z'-]*)", re.IGNORECASE),
    re.compile(r"\bname's ([a-z][a-z'-]*)", re.IGNORECASE),
    re.compile(r"\bcall me ([a-z][a-z'-]*)", re.IGNORECASE),
    re.compile(r"\bi am ([a-z][a-z'-]*)", re.IGNORECASE),
    re.compile(r"\bi'm ([a-z][a-z'-]*)", re.IGNORECASE),
    re.compile(r"\bit's ([a-z][a-z'-]*)", re.IGNORECASE),
)
_NAME_REFUSALS = ("won't say", "will not say", "rather not", "none of your", "not telling", "no name")

# Prefer a run of capitalized words after the preposition; on all-lowercase
# ASR output fall back to the single following token.
_PLACE_PATTERN_CAPS = re.compile(
    r"\b(?:from|in|to|visit|visited|near)\s+((?:[A-Z][a-zA-Z'-]*(?:\s|$)){1,3})"
)
_PLACE_PATTERN_BARE = re.compile(r"\b(?:from|in|to|visit|visited|near)\s+([a-z][a-z'-]*)")
_FAVORITE_PATTERNS = (
    re.compile(r"\bfavorite [a-z]+ is ((?:[a-z0-9][a-z0-9'-]*\s?){1,6})", re.IGNORECASE),
    re.compile(r"\bi (?:love|like|enjoy) ((?:[a-z0-9][a-z0-9'-]*\s?){1,6})", re.IGNORECASE),
    re.compile(r"\b(?:probably|maybe) ((?:[a-z0-9][a-z0-9'-]*\s?){1,6})", re.IGNORECASE),
)

_PLACE_SLOTS = frozenset(
    "origin_place dream_destination travel_wishlist place location".split()
)
_FAVORITE_SLOTS = frozenset(
    "favorite_title favorite_movie favorite_song favorite_artist favorite_genre favorite_character".split()
)
_FREQUENCY_SLOTS = frozenset("exercises workout_routine eats_healthy recent_activity".split())


def _letters_share(text: str) -> float:
    """Share of non-space characters that are plain ASCII letters or digits.

    Background noise picked up by ASR tends to come back as symbols or
    other-script characters; a low share marks the turn as garbled.
    """
    stripped = [c for c in text if not c.isspace()]
    if not stripped:
        return 0.0
    alpha = sum(1 for c in stripped if c.isascii() and (c.isalpha() or c.isdigit()))
    return alpha / len(stripped)


def _looks_garbled(text: str) -> bool:
    if not text or not text.strip():
        return True
    if not tokenize(text):
        return True
    return _letters_share(text) < 0.5


def extract_name(text: str) -> str | None:
    """Pull a first-name candidate out of an introduction, if any.

    Handles "my name is X", "I'm X", and a bare token; refusals and
    pronoun-like tokens yield None.
    """
    if not text or len(text) > MAX_INPUT_CHARS:
        return None
    lowered = text.lower()
    if any(refusal in lowered for refusal in _NAME_REFUSALS):
        return None
    for pattern in _NAME_PATTERNS:
        match = pattern.search(text)
        if match:
            candidate = match.group(1).strip("'-")
            if candidate.lower() not in _NAME_BLOCKLIST and candidate.isalpha():
                return candidate.capitalize()
    tokens = tokenize(text)
    if len(tokens) == 1 and tokens[0].isalpha() and tokens[0] not in _NAME_BLOCKLIST:
        return tokens[0].capitalize()
    return None


def _clause_after_fillers(text: str) -> str:
    cleaned = text.strip().strip("?!.")
    for _ in range(3):
        reduced = _LEAD_FILLER.sub("", cleaned).strip()
        if reduced == cleaned:
            break
        cleaned = reduced
    return cleaned.strip()


def _extract_entity(slot: str, text: str, lowered: str) -> str | None:
    if slot == "user_name":
        return extract_name(text)
    if slot in _FREQUENCY_SLOTS:
        for term in _FREQUENCY_TERMS:
            if term in lowered:
                return term
    if slot in _PLACE_SLOTS:
        match = _PLACE_PATTERN_CAPS.search(text)
        if match:
            return match.group(1).strip()
        match = _PLACE_PATTERN_BARE.search(text)
        if match:
            return match.group(1).strip().title()
    if slot in _FAVORITE_SLOTS:
        for pattern in _FAVORITE_PATTERNS:
            match = pattern.search(text)
            if match:
                return match.group(1).strip()
    clause = _clause_after_fillers(text)
    return clause or None


class RuleBasedInterpreter:
    """Deterministic keyword/pattern understanding; never raises."""

    def interpret(self, text: str, expected: list[str] | None = None) -> Interpretation:
        text = (text or "")[:MAX_INPUT_CHARS]
        if _looks_garbled(text):
            return Interpretation(Intent.UNCLEAR)

        lowered = text.lower()
        tokens = tokenize(text)
        token_set = set(tokens)

        cues = frozenset(
            topic for topic, lexicon in _TOPIC_LEXICONS.items() if token_set & lexicon
        )
        polarity = self._polarity(token_set)
        intent = self._intent(text, lowered, tokens, token_set)

        entities: dict = {}
        if intent is not Intent.UNCLEAR:
            if intent is Intent.QUESTION:
                entities["question_topic"] = lowered.strip()
            for slot in expected or []:
                value = _extract_entity(slot, text, lowered)
                if value:
                    entities[slot] = value
        return Interpretation(intent, polarity, entities, cues)

    @staticmethod
    def _intent(text: str, lowered: str, tokens: list[str], token_set: set) -> Intent:
        if "?" in text or (tokens and tokens[0] in _WH_WORDS):
            return Intent.QUESTION
        if tokens and tokens[0] in _AUX_OPENERS and len(tokens) >= 3 and tokens[1] in {"you", "i", "we", "it"}:
            return Intent.QUESTION
        if token_set & _DETAIL_WORDS:
            return Intent.REQUEST_DETAIL
        head = tokens[:3]
        if any(t in _YES_WORDS for t in head):
            return Intent.YES_REPLY
        if any(t in _NO_WORDS for t in head) or any(p in lowered for p in _NO_PHRASES):
            return Intent.NO_REPLY
        return Intent.ANSWER

    @staticmethod
    def _polarity(token_set: set) -> Polarity:
        pos = len(token_set & _POSITIVE_WORDS)
        neg = len(token_set & _NEGATIVE_WORDS)
        if neg > pos:
            return Polarity.NEGATIVE
        if pos > neg:
            return Polarity.POSITIVE
        return Polarity.NEUTRAL


def load_prompt_template() -> str:
    return resources.files("talkcoach").joinpath("data/nlu_prompt.txt").read_text(encoding="utf-8")


class RemoteInterpreter:
    """LLM-backed interpreter over an OpenAI-style chat-completions endpoint.

    Requires TALKCOACH_LLM_BASE_URL, TALKCOACH_LLM_MODEL, and
    TALKCOACH_LLM_API_KEY. Malformed or failed responses fall back to the
    rule-based interpretation, flagged in the log.
    """

    ENV_VARS = ("TALKCOACH_LLM_BASE_URL", "TALKCOACH_LLM_MODEL", "TALKCOACH_LLM_API_KEY")

    def __init__(self, timeout_s: float = 10.0, max_in_flight: int = 4, transport=None):
        missing = missing_env(self.ENV_VARS)
        if missing:
            raise RuntimeError(
                "remote NLU provider needs environment variables: " + ", ".join(missing)
            )
        self.base_url = os.environ["TALKCOACH_LLM_BASE_URL"].rstrip("/")
        self.model = os.environ["TALKCOACH_LLM_MODEL"]
        self.api_key = os.environ["TALKCOACH_LLM_API_KEY"]
        self.timeout_s = timeout_s
        self.fallback = RuleBasedInterpreter()
        self.template = load_prompt_template()
        self._slots = threading.Semaphore(max_in_flight)
        self._transport = transport

    def interpret(self, text: str, expected: list[str] | None = None) -> Interpretation:
        fallback = self.fallback.interpret(text, expected)
        try:
            with self._slots:
                payload = self._call(text, expected or [])
            return self._parse(payload, fallback)
        except Exception as exc:  # any transport/parse problem degrades, never raises
            logger.warning("remote NLU failed (%s); using rule-based fallback", exc)
            return fallback

    def _call(self, text: str, expected: list[str]) -> dict:
        import httpx

        prompt = self.template.format(slots=", ".join(expected) or "none", text=text)
        body = {
            "model": self.model,
            "messages": [{"role": "user", "content": prompt}],
            "temperature": 0,
        }
        logger.debug("remote NLU request (key redacted): %s", json.dumps(body)[:500])
        client_kwargs = {"timeout": self.timeout_s}
        if self._transport is not None:
            client_kwargs["transport"] = self._transport
        with httpx.Client(**client_kwargs) as client:
            response = client.post(
                f"{self.base_url}/chat/completions",
                headers={"Authorization": f"Bearer {self.api_key}"},
                json=body,
            )
        response.raise_for_status()
        logger.debug("remote NLU response: %s", response.text[:500])
        content = response.json()["choices"][0]["message"]["content"]
        return json.loads(content)

    def _parse(self, payload: dict, fallback: Interpretation) -> Interpretation:
        intent = Intent(payload.get("intent", fallback.intent.value))
        polarity = Polarity(payload.get("polarity", fallback.polarity.value))
        entities = dict(payload.get("entities") or {})
        cues = frozenset(c for c in payload.get("topic_cues", []) if c in _TOPIC_LEXICONS)
        if intent is Intent.UNCLEAR:
            entities = {}
        return Interpretation(intent, polarity, entities, cues or fallback.topic_cues)


def missing_env(names: Iterable[str]) -> list[str]:
    return [name for name in names if not os.environ.get(name)]
