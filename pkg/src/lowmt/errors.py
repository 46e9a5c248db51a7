"""Exception types shared across the toolkit.

Every error raised by the public API derives from LowmtError so callers can
catch toolkit failures without swallowing programming errors.
"""

from __future__ import annotations


class LowmtError(Exception):
    """Base class for all toolkit errors."""


class AlignmentError(LowmtError):
    """Parallel inputs (files, hypothesis/reference lists) differ in length."""


class EncodingError(LowmtError):
    """Input bytes are not valid UTF-8; carries the offending line number."""

    def __init__(self, message: str, line: int):
        super().__init__(message)
        self.line = line


class CorpusFormatError(LowmtError):
    """Corpus content violates the plain-text/TSV contract."""


class SizeError(LowmtError):
    """Requested split sizes exceed the corpus."""


class EmptyInputError(LowmtError):
    """An operation that needs at least one item received none."""


class ConfigurationError(LowmtError):
    """Invalid configuration value (vocab sizes, search spaces, sessions)."""


class ModelKindError(LowmtError):
    """A subword operation was applied to the wrong model kind."""


class CoverageError(LowmtError):
    """A character cannot be segmented by the given unigram vocabulary."""


class ParseError(LowmtError):
    """A model or config file is malformed; carries the offending line number."""

    def __init__(self, message: str, line: int):
        super().__init__(message)
        self.line = line


class DegenerateReferenceError(LowmtError):
    """TER against an empty reference with a non-empty hypothesis."""


class RangeError(LowmtError):
    """A numeric argument is outside its legal range."""


class TrainerError(LowmtError):
    """A trainer adapter failed to produce a result."""


class SearchError(LowmtError):
    """Hyperparameter search cannot continue (e.g. a whole stage failed)."""


class ValidationError(LowmtError):
    """An annotation submission carries an invalid field; names the field."""

    def __init__(self, message: str, field: str):
        super().__init__(message)
        self.field = field


class ConflictError(LowmtError):
    """Double submission for an already-completed annotation unit."""


class UnknownAnnotatorError(LowmtError):
    """The named annotator is not part of the session."""


class CompletenessError(LowmtError):
    """A report or statistic requires a completed session."""


class IngestionError(LowmtError):
    """External annotation data could not be mapped; lists the bad rows."""

    def __init__(self, message: str, rows: list[int] | None = None):
        super().__init__(message)
        self.rows = rows or []


class StoreError(LowmtError):
    """The campaign store is corrupt beyond the tolerated trailing truncation."""


class StartupError(LowmtError):
    """The annotation service could not bind its address."""
