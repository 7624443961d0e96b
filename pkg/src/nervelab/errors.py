"""Shared exception types and resource guardrails."""

NERVE_SUBSET_CAP = 2**20
CHAIN_CAP = 10**7


class NerveLabError(Exception):
    """Base class for all nervelab errors."""


class SchemaError(NerveLabError):
    """Input file or data structure violates the documented schema."""


class ResourceCapError(NerveLabError):
    """An enumeration exceeded its guardrail; raised instead of truncating."""


class InternalInconsistencyError(NerveLabError):
    """A validated construction failed its own consistency check."""
