"""Conversation states and the fixed transition graph."""

from __future__ import annotations

from enum import Enum


class DialogueState(Enum):
    START = "start"
    INTRO_NEW_USER = "intro_new_user"
    INTRO_RETURNING = "intro_returning"
    HEALTH = "health"
    TRAVEL = "travel"
    ENTERTAINMENT = "entertainment"
    FEEDBACK_DELIVERY = "feedback_delivery"
    FEEDBACK_DETAIL = "feedback_detail"
    SURVEY = "survey"
    END = "end"


TOPIC_STATES = (DialogueState.HEALTH, DialogueState.TRAVEL, DialogueState.ENTERTAINMENT)
INTRO_STATES = (DialogueState.INTRO_NEW_USER, DialogueState.INTRO_RETURNING)

# Fixed at load; self-loops (multi-prompt states) are implicit. Feedback
# entry from topic states is additionally guarded by the turn budget.
TRANSITIONS: dict[DialogueState, frozenset[DialogueState]] = {
    DialogueState.START: frozenset({DialogueState.INTRO_NEW_USER, DialogueState.INTRO_RETURNING}),
    DialogueState.INTRO_NEW_USER: frozenset({DialogueState.HEALTH}),
    DialogueState.INTRO_RETURNING: frozenset({DialogueState.HEALTH}),
    DialogueState.HEALTH: frozenset(
        {DialogueState.TRAVEL, DialogueState.ENTERTAINMENT, DialogueState.FEEDBACK_DELIVERY}
    ),
    DialogueState.TRAVEL: frozenset(
        {DialogueState.ENTERTAINMENT, DialogueState.FEEDBACK_DELIVERY}
    ),
    DialogueState.ENTERTAINMENT: frozenset(
        {DialogueState.TRAVEL, DialogueState.FEEDBACK_DELIVERY}
    ),
    DialogueState.FEEDBACK_DELIVERY: frozenset(
        {DialogueState.FEEDBACK_DETAIL, DialogueState.SURVEY}
    ),
    DialogueState.FEEDBACK_DETAIL: frozenset({DialogueState.SURVEY}),
    DialogueState.SURVEY: frozenset({DialogueState.END}),
    DialogueState.END: frozenset(),
}


def reachable_from(start: DialogueState) -> set[DialogueState]:
    seen = {start}
    frontier = [start]
    while frontier:
        state = frontier.pop()
        for nxt in TRANSITIONS[state]:
            if nxt not in seen:
                seen.add(nxt)
                frontier.append(nxt)
    return seen


def check_graph() -> None:
    """Validate the structural invariants of the transition table."""
    for state in DialogueState:
        outgoing = TRANSITIONS[state]
        if state is DialogueState.END:
            assert not outgoing, "END must be terminal"
        else:
            assert outgoing, f"{state} has no outgoing edge"
    assert reachable_from(DialogueState.START) == set(DialogueState)
    for state in DialogueState:
        if state is not DialogueState.END:
            assert DialogueState.END in reachable_from(state), f"END unreachable from {state}"
