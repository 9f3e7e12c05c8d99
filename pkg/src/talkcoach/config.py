"""Application configuration: thresholds, word lists, script paths, store."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import yaml

from talkcoach.dialogue.budget import DEFAULT_MIN_ELAPSED_MS, DEFAULT_MIN_USER_TURNS
from talkcoach.dialogue.script import DialogueAssets, load_assets
from talkcoach.metrics import Thresholds, WordLists, load_wordlists

DEFAULT_STORE = "./talkcoach-store"

THRESHOLD_KEYS = (
    "awkward_max",
    "question_ratio_min",
    "wpm_low",
    "wpm_high",
    "lsm_min",
    "tic_min_count",
    "tic_min_share",
    "awkward_window",
    "question_heuristic",
)


@dataclass
class AppConfig:
    thresholds: Thresholds = field(default_factory=Thresholds)
    wordlists: WordLists = field(default_factory=load_wordlists)
    assets: DialogueAssets = field(default_factory=load_assets)
    min_user_turns: int = DEFAULT_MIN_USER_TURNS
    min_elapsed_ms: int = DEFAULT_MIN_ELAPSED_MS
    store_path: str = DEFAULT_STORE
    providers: str = "stub"
    cors_origins: list[str] = field(default_factory=lambda: ["*"])


def load_config(path: str | Path | None = None, **overrides) -> AppConfig:
    """Build the app config from an optional YAML file plus keyword overrides.

    Override precedence: CLI keyword > config file > defaults. Threshold
    overrides accept any of the keys in THRESHOLD_KEYS.
    """
    doc: dict = {}
    if path:
        doc = yaml.safe_load(Path(path).read_text(encoding="utf-8")) or {}

    threshold_values = {k: v for k, v in (doc.get("thresholds") or {}).items() if k in THRESHOLD_KEYS}
    threshold_values.update(
        {k: v for k, v in overrides.items() if k in THRESHOLD_KEYS and v is not None}
    )
    thresholds = Thresholds(**threshold_values)

    wl_cfg = doc.get("wordlists") or {}
    wordlists = load_wordlists(
        awkward_path=wl_cfg.get("awkward"),
        stopwords_path=wl_cfg.get("stopwords"),
        function_words_dir=wl_cfg.get("function_words"),
    )

    dlg = doc.get("dialogue") or {}
    assets = load_assets(
        prompts_path=dlg.get("prompts"),
        persona_path=dlg.get("persona"),
        catalog_path=dlg.get("catalog"),
    )

    def pick(name, file_value, default):
        value = overrides.get(name)
        if value is not None:
            return value
        return file_value if file_value is not None else default

    return AppConfig(
        thresholds=thresholds,
        wordlists=wordlists,
        assets=assets,
        min_user_turns=int(pick("min_user_turns", dlg.get("min_user_turns"), DEFAULT_MIN_USER_TURNS)),
        min_elapsed_ms=int(pick("min_elapsed_ms", dlg.get("min_elapsed_ms"), DEFAULT_MIN_ELAPSED_MS)),
        store_path=str(pick("store_path", doc.get("store"), DEFAULT_STORE)),
        providers=str(pick("providers", doc.get("providers"), "stub")),
        cors_origins=list(doc.get("cors_origins", ["*"])),
    )
