import pytest

from talkcoach.metrics import Thresholds, load_wordlists
from talkcoach.types import Speaker, Transcript, Utterance

# Golden synthetic user for service/e2e tests. The body lines answer the
# scripted topic questions (cycled if the session runs long); the feedback
# and survey phases get state-keyed replies. Durations are explicit so the
# pace verdict is non-trivial and every run is byte-identical.
GOLDEN_BODY = [
    ("my name is Max", 2000),
    ("I am doing great, thanks! How are you?", 3500),
    ("I have been planning a big trip lately", 3200),
    ("yes I eat healthy every day", 2600),
    ("yes I work out daily", 2400),
    ("I keep my weekends completely free of work", 3300),
    ("I am from Graz", 1800),
    ("I would rather live in Lisbon", 2400),
    ("maybe Japan someday?", 2000),
    ("you should try the old town and the castle hill", 3600),
    ("yes absolutely, solo travel sounds exciting", 3200),
    ("I love a good mystery movie", 2500),
    ("mystery I would say", 2100),
    ("probably the classic crime composers?", 2800),
    ("the detective obviously", 2200),
    ("yes that sounds exactly like my kind of thing", 3100),
    ("I read a lot of crime novels too", 2900),
    ("mostly on rainy weekends", 2300),
    ("yes I would recommend it to anyone", 2800),
    ("it started when I was a kid", 2700),
    ("my grandmother gave me a mystery box set", 3400),
    ("that is the whole story really", 2500),
]

GOLDEN_FEEDBACK_REPLY = ("yes, tell me the underlying metrics please", 3000)
GOLDEN_DETAIL_REPLY = ("that all makes sense to me", 2400)
GOLDEN_SURVEY_REPLIES = [
    ("no, you did really well", 2500),
    ("no, you were easy to understand", 2600),
    ("5", 800),
]


class GoldenUser:
    """Deterministic synthetic user: fixed answers keyed by dialogue phase."""

    def __init__(self):
        self._body_index = 0
        self._survey_index = 0

    def reply(self, state: str) -> tuple[str, int]:
        if state == "feedback_delivery":
            return GOLDEN_FEEDBACK_REPLY
        if state == "feedback_detail":
            return GOLDEN_DETAIL_REPLY
        if state == "survey":
            reply = GOLDEN_SURVEY_REPLIES[min(self._survey_index, len(GOLDEN_SURVEY_REPLIES) - 1)]
            self._survey_index += 1
            return reply
        reply = GOLDEN_BODY[self._body_index % len(GOLDEN_BODY)]
        self._body_index += 1
        return reply


@pytest.fixture(scope="session")
def wordlists():
    return load_wordlists()


@pytest.fixture(scope="session")
def thresholds():
    return Thresholds()


def utt(speaker: str, text: str, start_ms: int = 0, end_ms: int | None = None) -> Utterance:
    if end_ms is None:
        end_ms = start_ms + 1000
    return Utterance(Speaker(speaker), text, start_ms, end_ms)


def transcript(*turns, session_id: str = "t") -> Transcript:
    """Build a transcript from (speaker, text[, duration_ms]) tuples, laid out sequentially."""
    utterances = []
    clock = 0
    for turn in turns:
        speaker, text = turn[0], turn[1]
        duration = turn[2] if len(turn) > 2 else 1000
        utterances.append(Utterance(Speaker(speaker), text, clock, clock + duration))
        clock += duration
    return Transcript(utterances, session_id=session_id)
