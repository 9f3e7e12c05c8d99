"""The five conversation-quality metrics and the report builder.

All operations are pure functions of (transcript, word lists, thresholds).
Precondition failures never raise; they surface as INCONCLUSIVE verdicts so a
report is always complete.
"""

from __future__ import annotations

from collections import Counter
from datetime import datetime, timezone

from talkcoach.metrics.thresholds import Thresholds
from talkcoach.metrics.tokenizer import tokenize
from talkcoach.metrics.wordlists import WordLists
from talkcoach.types import FeedbackReport, MetricVerdict, Speaker, Transcript, Verdict

MS_PER_MINUTE = 60_000.0

# Interrogative openers for the optional no-punctuation heuristic.
_WH_OPENERS = frozenset(
    "who what when where why which whose whom how "
    "do does did am is are was were can could will would shall should may might have has had".split()
)


def _metric_users(transcript: Transcript) -> list:
    """User turns admitted to metrics: non-empty text only."""
    return [u for u in transcript if u.speaker is Speaker.USER and u.text.strip()]


def _inconclusive(name: str, reason: str) -> MetricVerdict:
    return MetricVerdict(
        metric_name=name,
        value=0.0,
        verdict=Verdict.INCONCLUSIVE,
        advice=reason,
        details=(),
    )


def count_awkward_transitions(
    transcript: Transcript, lists: WordLists, thresholds: Thresholds
) -> MetricVerdict:
    """Count user utterances that open with a listed awkward transition.

    A multi-token phrase matches as a contiguous token run starting within
    the first ``thresholds.awkward_window`` token positions. Each utterance
    counts once toward the value no matter how many phrases it matches.
    """
    name = "awkward_transitions"
    users = _metric_users(transcript)
    if not users:
        return _inconclusive(name, "There was no user speech to check for transitions.")

    phrase_tokens = [(p, tuple(tokenize(p))) for p in lists.awkward_transitions]
    matches: Counter[str] = Counter()
    flagged_utterances = 0
    for utt in users:
        tokens = tokenize(utt.text)
        hit = False
        for phrase, ptoks in phrase_tokens:
            if not ptoks:
                continue
            n = len(ptoks)
            for start in range(min(thresholds.awkward_window, len(tokens))):
                if tuple(tokens[start : start + n]) == ptoks:
                    matches[phrase] += 1
                    hit = True
                    break
        if hit:
            flagged_utterances += 1

    value = float(flagged_utterances)
    good = flagged_utterances < thresholds.awkward_max
    if good:
        advice = "Your topic changes felt smooth and natural."
    else:
        top = ", ".join(sorted(matches, key=lambda p: (-matches[p], p))[:3])
        advice = (
            "Try easing into new topics instead of jumping; openers like "
            f"{top} make transitions feel abrupt."
        )
    details = tuple(sorted(matches.items(), key=lambda kv: (-kv[1], kv[0])))
    return MetricVerdict(name, value, Verdict.GOOD if good else Verdict.NEEDS_WORK, advice, details)


def question_ratio(transcript: Transcript, thresholds: Thresholds) -> MetricVerdict:
    """Share of user utterances that ask a question (by raw '?')."""
    name = "questions"
    users = _metric_users(transcript)
    if not users:
        return _inconclusive(name, "There was no user speech to look for questions in.")

    def is_question(text: str) -> bool:
        if "?" in text:
            return True
        if thresholds.question_heuristic:
            tokens = tokenize(text)
            return bool(tokens) and tokens[0] in _WH_OPENERS
        return False

    asked = sum(1 for u in users if is_question(u.text))
    value = asked / len(users)
    good = value >= thresholds.question_ratio_min
    advice = (
        "You asked plenty of questions and kept the conversation flowing."
        if good
        else "Try asking more questions; showing curiosity makes people enjoy talking with you."
    )
    details = (("questions", asked), ("utterances", len(users)))
    return MetricVerdict(name, value, Verdict.GOOD if good else Verdict.NEEDS_WORK, advice, details)


def words_per_minute(transcript: Transcript, thresholds: Thresholds) -> MetricVerdict:
    """Speaking pace over the user's total recorded speaking time."""
    name = "pace"
    users = _metric_users(transcript)
    total_tokens = sum(len(tokenize(u.text)) for u in users)
    total_ms = sum(u.duration_ms for u in users)
    if not users or total_ms <= 0:
        return _inconclusive(name, "Your speaking time was not recorded, so pace could not be measured.")

    value = total_tokens / (total_ms / MS_PER_MINUTE)
    if thresholds.wpm_low <= value <= thresholds.wpm_high:
        verdict, advice = Verdict.GOOD, "You spoke at a comfortable, conversational pace."
    elif value > thresholds.wpm_high:
        verdict, advice = (
            Verdict.NEEDS_WORK,
            "Try to slow down a little; you were talking faster than a relaxed conversation calls for.",
        )
    else:
        verdict, advice = (
            Verdict.NEEDS_WORK,
            "Try to speak a bit faster or add more substance to your answers; long pauses lose your partner.",
        )
    details = (("tokens", total_tokens), ("duration_ms", total_ms))
    return MetricVerdict(name, value, verdict, advice, details)


def detect_tics(transcript: Transcript, lists: WordLists, thresholds: Thresholds) -> MetricVerdict:
    """Flag overused non-stopword tokens (verbal tics).

    A token is a tic when it appears at least ``tic_min_count`` times AND
    makes up at least ``tic_min_share`` of the user's content tokens.
    Details carry the full frequency list, count-descending then alphabetical.
    """
    name = "tics"
    users = _metric_users(transcript)
    if not users:
        return _inconclusive(name, "There was no user speech to check for overused words.")

    counts: Counter[str] = Counter(
        token for u in users for token in tokenize(u.text) if token not in lists.stopwords
    )
    if not counts:
        return _inconclusive(name, "Everything you said was common filler, so word variety could not be judged.")

    total = sum(counts.values())
    ordered = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
    flagged = [
        token
        for token, count in ordered
        if count >= thresholds.tic_min_count and count / total >= thresholds.tic_min_share
    ]
    value = float(len(flagged))
    if flagged:
        verdict = Verdict.NEEDS_WORK
        advice = (
            "You leaned on the same words a lot; watch out for: " + ", ".join(flagged) + "."
        )
    else:
        verdict = Verdict.GOOD
        advice = "Your word choice stayed varied, with no overused words."
    return MetricVerdict(name, value, verdict, advice, tuple(ordered))


def lsm_score(transcript: Transcript, lists: WordLists, thresholds: Thresholds) -> MetricVerdict:
    """Language style matching between the user's and bot's function words.

    Per category c: u_c and b_c are that category's share of each side's
    total tokens, the category score is 1 - |u_c - b_c| / (u_c + b_c + 1e-4),
    and the final score is the mean over categories with any mass. Categories
    silent on both sides are skipped, not scored as perfect matches.
    """
    name = "acknowledgment"
    users = _metric_users(transcript)
    bots = [u for u in transcript if u.speaker is Speaker.BOT and u.text.strip()]
    if not users or not bots:
        return _inconclusive(name, "Both sides of the conversation are needed to score attentiveness.")

    user_tokens = [t for u in users for t in tokenize(u.text)]
    bot_tokens = [t for u in bots for t in tokenize(u.text)]
    if not user_tokens or not bot_tokens:
        return _inconclusive(name, "Both sides of the conversation are needed to score attentiveness.")

    user_counts = Counter(user_tokens)
    bot_counts = Counter(bot_tokens)
    total_user = len(user_tokens)
    total_bot = len(bot_tokens)

    scores: list[float] = []
    details: list[tuple[str, int]] = []
    for category, words in sorted(lists.function_word_categories.items()):
        cu = sum(user_counts[w] for w in words)
        cb = sum(bot_counts[w] for w in words)
        if cu == 0 and cb == 0:
            continue
        u_c = cu / total_user
        b_c = cb / total_bot
        scores.append(1.0 - abs(u_c - b_c) / (u_c + b_c + 0.0001))
        details.append((category, cu + cb))

    if not scores:
        return _inconclusive(name, "Neither side used enough everyday function words to compare styles.")

    value = sum(scores) / len(scores)
    good = value >= thresholds.lsm_min
    advice = (
        "You paid close attention to your partner and matched their style well."
        if good
        else "Try acknowledging your partner more, for example by picking up words and phrases they used."
    )
    details.sort(key=lambda kv: (-kv[1], kv[0]))
    return MetricVerdict(name, value, Verdict.GOOD if good else Verdict.NEEDS_WORK, advice, tuple(details))


def build_report(
    transcript: Transcript,
    lists: WordLists,
    thresholds: Thresholds,
    generated_at: datetime | None = None,
) -> FeedbackReport:
    """Run all five metrics; precondition failures become INCONCLUSIVE."""
    return FeedbackReport(
        awkward=count_awkward_transitions(transcript, lists, thresholds),
        questions=question_ratio(transcript, thresholds),
        pace=words_per_minute(transcript, thresholds),
        tics=detect_tics(transcript, lists, thresholds),
        acknowledgment=lsm_score(transcript, lists, thresholds),
        generated_at=generated_at or datetime.now(timezone.utc),
    )
