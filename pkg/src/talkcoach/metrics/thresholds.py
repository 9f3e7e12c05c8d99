"""Verdict thresholds for the five conversation metrics."""

from __future__ import annotations

from dataclasses import dataclass, replace


@dataclass(frozen=True)
class Thresholds:
    """Tuning knobs for the feedback metrics.

    Defaults encode the published guidance the metrics are built on: fewer
    than 10 awkward transitions per session, a question ratio of at least
    0.39, a conversational pace of 120-150 words per minute, and a style
    matching score of at least 0.8. Tic thresholds and the awkward-match
    window are artifact defaults; everything is overridable via config.
    """

    awkward_max: int = 10
    question_ratio_min: float = 0.39
    wpm_low: float = 120.0
    wpm_high: float = 150.0
    lsm_min: float = 0.8
    tic_min_count: int = 5
    tic_min_share: float = 0.03
    awkward_window: int = 3
    # Optional interrogative-opener heuristic for punctuation-free ASR text.
    question_heuristic: bool = False

    def __post_init__(self):
        if self.wpm_low >= self.wpm_high:
            raise ValueError("wpm_low must be < wpm_high")
        if not 0 < self.question_ratio_min < 1:
            raise ValueError("question_ratio_min must be in (0, 1)")
        if not 0 < self.lsm_min <= 1:
            raise ValueError("lsm_min must be in (0, 1]")
        for name in ("awkward_max", "wpm_low", "tic_min_count", "tic_min_share", "awkward_window"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be > 0")

    def with_overrides(self, **overrides) -> "Thresholds":
        provided = {k: v for k, v in overrides.items() if v is not None}
        return replace(self, **provided) if provided else self
