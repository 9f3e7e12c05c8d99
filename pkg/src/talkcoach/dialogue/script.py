"""Loading of the prompt script, persona facts, and recommendation catalog."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import yaml

from talkcoach.metrics.tokenizer import tokenize
from talkcoach.metrics.wordlists import default_data_dir


@dataclass(frozen=True)
class Prompt:
    text: str
    slot: str | None = None
    kind: str = "question"  # question | recommendation | rating
    fallback_text: str | None = None


@dataclass(frozen=True)
class PersonaFact:
    """A static first-person statement covering one question topic."""

    topic: str
    statement: str
    triggers: tuple[str, ...]


def _normalize(text: str) -> str:
    return " ".join(tokenize(text))


class Persona:
    def __init__(self, facts: list[PersonaFact]):
        self.facts = list(facts)

    def answer(self, question_topic: str) -> str | None:
        """Statement for the first fact whose trigger occurs in the question."""
        normalized = f" {_normalize(question_topic)} "
        for fact in self.facts:
            for trigger in fact.triggers:
                if f" {trigger} " in normalized:
                    return fact.statement
        return None


@dataclass(frozen=True)
class CatalogItem:
    title: str
    genre: str
    artist: str | None = None

    def describe(self) -> str:
        if self.artist:
            return f'"{self.title}" by {self.artist}'
        return f'"{self.title}"'


class Catalog:
    """Static recommendation source; picks deterministically by genre hint."""

    def __init__(self, movies: list[CatalogItem], songs: list[CatalogItem]):
        self.movies = list(movies)
        self.songs = list(songs)

    def recommend(self, genre_hint: str | None = None) -> CatalogItem:
        pool = self.movies + self.songs
        if genre_hint:
            hint_tokens = set(tokenize(genre_hint))
            for item in pool:
                if item.genre in hint_tokens:
                    return item
        return self.movies[0] if self.movies else pool[0]


@dataclass
class PromptScript:
    intro_new: list[Prompt]
    intro_returning: list[Prompt]
    topics: dict[str, list[Prompt]]  # keyed by state value: health/travel/entertainment
    survey: list[Prompt]
    followups: list[str]
    bridges: dict[str, str]
    acknowledgments: dict = field(default_factory=dict)
    clarify: str = "Sorry, I didn't quite catch that."
    persona_fallback: str = "That's a good question."
    recommendation_text: str = "You might enjoy {item}. Does that sound good?"
    returning_rating_clause: str = ""
    returning_no_rating_clause: str = ""


def _parse_prompts(raw: list) -> list[Prompt]:
    prompts = []
    for entry in raw or []:
        if isinstance(entry, str):
            prompts.append(Prompt(text=entry))
        else:
            prompts.append(
                Prompt(
                    text=entry.get("text", ""),
                    slot=entry.get("slot"),
                    kind=entry.get("kind", "question"),
                    fallback_text=entry.get("fallback_text"),
                )
            )
    return prompts


def load_script(path: str | Path | None = None) -> PromptScript:
    source = Path(path) if path else default_data_dir() / "prompts.yaml"
    doc = yaml.safe_load(source.read_text(encoding="utf-8"))
    return PromptScript(
        intro_new=_parse_prompts(doc["intro_new"]),
        intro_returning=_parse_prompts(doc["intro_returning"]),
        topics={
            "health": _parse_prompts(doc["health"]),
            "travel": _parse_prompts(doc["travel"]),
            "entertainment": _parse_prompts(doc["entertainment"]),
        },
        survey=_parse_prompts(doc["survey"]),
        followups=list(doc.get("followups", [])),
        bridges=dict(doc.get("bridges", {})),
        acknowledgments=dict(doc.get("acknowledgments", {})),
        clarify=doc.get("clarify", "Sorry, I didn't quite catch that."),
        persona_fallback=doc.get("persona_fallback", "That's a good question."),
        recommendation_text=doc.get(
            "recommendation_text", "You might enjoy {item}. Does that sound good?"
        ),
        returning_rating_clause=doc.get("returning_rating_clause", ""),
        returning_no_rating_clause=doc.get("returning_no_rating_clause", ""),
    )


def load_persona(path: str | Path | None = None) -> Persona:
    source = Path(path) if path else default_data_dir() / "persona.yaml"
    doc = yaml.safe_load(source.read_text(encoding="utf-8"))
    facts = [
        PersonaFact(
            topic=entry["topic"],
            statement=entry["statement"],
            triggers=tuple(_normalize(t) for t in entry.get("triggers", [])),
        )
        for entry in doc.get("facts", [])
    ]
    return Persona(facts)


def load_catalog(path: str | Path | None = None) -> Catalog:
    source = Path(path) if path else default_data_dir() / "catalog.yaml"
    doc = yaml.safe_load(source.read_text(encoding="utf-8"))

    def items(key):
        return [
            CatalogItem(title=e["title"], genre=e.get("genre", ""), artist=e.get("artist"))
            for e in doc.get(key, [])
        ]

    return Catalog(movies=items("movies"), songs=items("songs"))


@dataclass
class DialogueAssets:
    script: PromptScript
    persona: Persona
    catalog: Catalog


def load_assets(
    prompts_path: str | Path | None = None,
    persona_path: str | Path | None = None,
    catalog_path: str | Path | None = None,
) -> DialogueAssets:
    return DialogueAssets(
        script=load_script(prompts_path),
        persona=load_persona(persona_path),
        catalog=load_catalog(catalog_path),
    )
