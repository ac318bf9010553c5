"""Shared exception base for the engine."""


class AgentError(Exception):
    """Base class for every error raised by this package."""
