"""Conversation-quality metrics over timestamped transcripts."""

from talkcoach.metrics.analyzers import (
    build_report,
    count_awkward_transitions,
    detect_tics,
    lsm_score,
    question_ratio,
    words_per_minute,
)
from talkcoach.metrics.thresholds import Thresholds
from talkcoach.metrics.tokenizer import tokenize
from talkcoach.metrics.wordlists import WordLists, load_wordlists, make_wordlists

__all__ = [
    "Thresholds",
    "WordLists",
    "build_report",
    "count_awkward_transitions",
    "detect_tics",
    "load_wordlists",
    "lsm_score",
    "make_wordlists",
    "question_ratio",
    "tokenize",
    "words_per_minute",
]
