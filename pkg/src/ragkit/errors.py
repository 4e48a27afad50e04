"""Exception hierarchy shared across the toolkit."""

from __future__ import annotations


class RagkitError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(RagkitError):
    """Invalid or inconsistent user configuration."""


class IngestError(RagkitError):
    """Malformed corpus input or snippet-store violation."""


class RetrievalError(RagkitError):
    """Missing index, dimension mismatch, or unusable retriever spec."""


class EmbeddingProviderError(RagkitError):
    """Embedding provider failure; safe to retry. Carries diagnostics."""

    def __init__(self, message: str, *, provider_id: str = "", detail: str = ""):
        super().__init__(message)
        self.provider_id = provider_id
        self.detail = detail


class BackendError(RagkitError):
    """Generation backend failure that is not worth retrying."""


class BackendExhaustedError(BackendError):
    """All retry attempts against a generation backend failed."""

    def __init__(self, message: str, *, attempts: int = 0, last_status: int | None = None):
        super().__init__(message)
        self.attempts = attempts
        self.last_status = last_status
