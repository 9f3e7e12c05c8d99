"""Scripted small-talk dialogue engine."""

from talkcoach.dialogue.budget import TurnBudget
from talkcoach.dialogue.engine import (
    DialogueEngine,
    EngineStateError,
    SlotStore,
    TurnPlan,
    deliver_feedback,
    parse_rating,
)
from talkcoach.dialogue.script import DialogueAssets, load_assets
from talkcoach.dialogue.states import TRANSITIONS, DialogueState, check_graph, reachable_from

__all__ = [
    "DialogueAssets",
    "DialogueEngine",
    "DialogueState",
    "EngineStateError",
    "SlotStore",
    "TRANSITIONS",
    "TurnBudget",
    "TurnPlan",
    "check_graph",
    "deliver_feedback",
    "load_assets",
    "parse_rating",
    "reachable_from",
]
