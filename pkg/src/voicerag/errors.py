"""Exception types shared across the package.

Every contract violation raises a dedicated subclass of VoiceRagError so
callers (and the CLI/gateway error mappers) can branch on type rather than
parse messages.
"""

from __future__ import annotations


class VoiceRagError(Exception):
    """Base class for all errors raised by this package."""


# --- corpus pipeline ---

class EmptyDocumentError(VoiceRagError):
    """Document body is empty."""


class SchemaViolationError(VoiceRagError):
    """Structurer output (or a hand-built chunk) violates the chunk schema."""

    def __init__(self, fields: list[str]):
        self.fields = list(fields)
        super().__init__(f"schema violation in fields: {', '.join(self.fields)}")


class BackendUnavailableError(VoiceRagError):
    """A structurer or stage backend could not be reached."""


class InvalidRateError(VoiceRagError):
    """Sampling rate outside (0, 1]."""


class InvalidTransitionError(VoiceRagError):
    """Review applied to a chunk whose state does not admit it."""

    def __init__(self, current_state: str, attempted: str):
        self.current_state = current_state
        self.attempted = attempted
        super().__init__(f"illegal transition from {current_state}: {attempted}")


# --- knowledge graph ---

class GraphIntegrityError(VoiceRagError):
    """A chunk's relation references an entity surface the chunk never declared."""

    def __init__(self, chunk_id: str, detail: str = ""):
        self.chunk_id = chunk_id
        super().__init__(f"integrity error in chunk {chunk_id}: {detail}")


class CorruptGraphFileError(VoiceRagError):
    """Graph file is truncated or structurally invalid."""

    def __init__(self, line: int, detail: str = ""):
        self.line = line
        super().__init__(f"corrupt graph file at line {line}: {detail}")


class UnsupportedVersionError(VoiceRagError):
    """Graph or chunk file carries a schema version this build cannot read."""


class InvalidKError(VoiceRagError):
    """Retrieval asked for k = 0 results."""


class BudgetExceededError(VoiceRagError):
    """Prompt character budget too small for even the query and preamble."""


# --- pipeline / metrics ---

class MetricUndefinedError(VoiceRagError):
    """A module metric has a zero denominator for this trace."""

    def __init__(self, field: str):
        self.field = field
        super().__init__(f"metric undefined: {field}")


# --- stage backends ---

class UnrecognizedAudioError(VoiceRagError):
    """Audio input is empty or carries no transcript tag the stub ASR knows."""


class StageTimeoutError(VoiceRagError):
    """Remote stage call exceeded its configured timeout."""

    def __init__(self, stage: str):
        self.stage = stage
        super().__init__(f"timeout calling remote stage: {stage}")


class StageUnreachableError(VoiceRagError):
    """Remote stage endpoint refused or dropped the connection."""

    def __init__(self, stage: str):
        self.stage = stage
        super().__init__(f"remote stage unreachable: {stage}")


class MalformedResponseError(VoiceRagError):
    """Remote stage returned a body that does not match its schema."""

    def __init__(self, stage: str, detail: str = ""):
        self.stage = stage
        super().__init__(f"malformed response from stage {stage}: {detail}")


# --- gateway ---

class RatingInvalidError(VoiceRagError):
    """Rating record rejected at ingest (bad dimension or score out of range)."""


class ConfigError(VoiceRagError):
    """Server/pipeline configuration failed validation.

    `location` is a dotted path into the config document, e.g.
    ``backends.pacing.llm_rate``.
    """

    def __init__(self, location: str, detail: str):
        self.location = location
        self.detail = detail
        super().__init__(f"{location}: {detail}")
