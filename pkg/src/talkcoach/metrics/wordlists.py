"""Word-list assets: awkward transitions, stopwords, function-word categories.

Lists ship as plain-text data files (one entry per line, ``#`` comments) and
can be overridden per deployment; see :func:`load_wordlists`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable, Mapping

FUNCTION_WORD_CATEGORIES = (
    "personal_pronouns",
    "impersonal_pronouns",
    "articles",
    "conjunctions",
    "prepositions",
    "auxiliary_verbs",
    "negations",
    "quantifiers",
    "common_adverbs",
)


def parse_wordlist(text: str) -> list[str]:
    """Parse one-entry-per-line text, skipping blanks and ``#`` comments."""
    entries = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        entries.append(line.lower())
    return entries


def _read_wordlist_file(path: Path) -> list[str]:
    return parse_wordlist(path.read_text(encoding="utf-8"))


@dataclass(frozen=True)
class WordLists:
    """The three lexicons the feedback metrics depend on.

    All entries are lowercase and non-empty; the function-word categories are
    pairwise disjoint so no token is double-counted in style matching.
    """

    awkward_transitions: tuple[str, ...]
    stopwords: frozenset[str]
    function_word_categories: dict[str, frozenset[str]]

    def __post_init__(self):
        for entry in list(self.awkward_transitions) + sorted(self.stopwords):
            if not entry or entry != entry.lower():
                raise ValueError(f"word-list entries must be lowercase and non-empty: {entry!r}")
        seen: dict[str, str] = {}
        for category, words in self.function_word_categories.items():
            for word in words:
                if not word or word != word.lower():
                    raise ValueError(f"bad function word in {category}: {word!r}")
                if word in seen:
                    raise ValueError(
                        f"function-word categories must be disjoint: {word!r} is in "
                        f"both {seen[word]} and {category}"
                    )
                seen[word] = category


def default_data_dir() -> Path:
    return Path(resources.files("talkcoach").joinpath("data"))


def load_wordlists(
    awkward_path: Path | str | None = None,
    stopwords_path: Path | str | None = None,
    function_words_dir: Path | str | None = None,
) -> WordLists:
    """Load word lists, falling back to the bundled defaults per argument."""
    data = default_data_dir()
    awkward = _read_wordlist_file(Path(awkward_path) if awkward_path else data / "awkward_transitions.txt")
    stopwords = _read_wordlist_file(Path(stopwords_path) if stopwords_path else data / "stopwords.txt")
    fw_dir = Path(function_words_dir) if function_words_dir else data / "function_words"
    categories = {}
    for name in FUNCTION_WORD_CATEGORIES:
        path = fw_dir / f"{name}.txt"
        if path.exists():
            categories[name] = frozenset(_read_wordlist_file(path))
    # A custom directory may define extra categories beyond the standard nine.
    for path in sorted(fw_dir.glob("*.txt")):
        if path.stem not in categories:
            categories[path.stem] = frozenset(_read_wordlist_file(path))
    return WordLists(
        awkward_transitions=tuple(awkward),
        stopwords=frozenset(stopwords),
        function_word_categories=categories,
    )


def make_wordlists(
    awkward: Iterable[str],
    stopwords: Iterable[str],
    categories: Mapping[str, Iterable[str]],
) -> WordLists:
    """Build a WordLists from in-memory collections (mainly for tests)."""
    return WordLists(
        awkward_transitions=tuple(w.lower() for w in awkward),
        stopwords=frozenset(w.lower() for w in stopwords),
        function_word_categories={k: frozenset(w.lower() for w in v) for k, v in categories.items()},
    )
