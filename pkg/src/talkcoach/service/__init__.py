"""HTTP API, terminal client, and batch CLI."""

from talkcoach.service.session import ConversationSession, SessionEndedError, TurnOutcome

__all__ = ["ConversationSession", "SessionEndedError", "TurnOutcome"]
