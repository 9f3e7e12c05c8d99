"""Deterministic word tokenization shared by every metric."""

from __future__ import annotations

import re

# Maximal runs of letters/digits, optionally joined by internal apostrophes
# ("i'm", "don't"). Quoting apostrophes at word edges are dropped; underscores
# are not word characters here.
_TOKEN_RE = re.compile(r"[^\W_]+(?:'[^\W_]+)*", re.UNICODE)


def tokenize(text: str) -> list[str]:
    """Split text into lowercase word tokens, dropping punctuation.

    Question marks are deliberately not preserved; callers that care about
    questions inspect the raw text instead.
    """
    lowered = text.lower().replace("’", "'")
    return _TOKEN_RE.findall(lowered)
