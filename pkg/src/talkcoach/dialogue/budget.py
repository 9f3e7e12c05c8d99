"""Minimum conversation length gating entry to the feedback phase."""

from __future__ import annotations

from dataclasses import dataclass, field

DEFAULT_MIN_USER_TURNS = 24
DEFAULT_MIN_ELAPSED_MS = 420_000  # seven minutes


@dataclass
class TurnBudget:
    """Feedback opens after enough user turns OR enough elapsed time.

    ``met`` is monotone: once either condition has held, it stays true for
    the rest of the session even if thresholds are later reconfigured.
    """

    min_user_turns: int = DEFAULT_MIN_USER_TURNS
    min_elapsed_ms: int = DEFAULT_MIN_ELAPSED_MS
    user_turns: int = 0
    elapsed_ms: int = 0
    _latched: bool = field(default=False, repr=False)

    def record_user_turn(self, duration_ms: int = 0) -> None:
        self.user_turns += 1
        self.elapsed_ms += max(0, duration_ms)
        self._check()

    def add_elapsed(self, duration_ms: int) -> None:
        self.elapsed_ms += max(0, duration_ms)
        self._check()

    def _check(self) -> None:
        if self.user_turns >= self.min_user_turns or self.elapsed_ms >= self.min_elapsed_ms:
            self._latched = True

    @property
    def met(self) -> bool:
        self._check()
        return self._latched
