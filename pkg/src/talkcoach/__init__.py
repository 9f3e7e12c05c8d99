"""talkcoach: practice small talk with a scripted partner and get scored feedback."""

from talkcoach.types import (
    FeedbackReport,
    MetricVerdict,
    Speaker,
    Transcript,
    Utterance,
    Verdict,
)

__version__ = "0.1.0"

__all__ = [
    "FeedbackReport",
    "MetricVerdict",
    "Speaker",
    "Transcript",
    "Utterance",
    "Verdict",
    "__version__",
]
