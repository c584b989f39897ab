"""Exception hierarchy shared by all gaztrack modules.

Every error carries a stable ``code`` string that the CLI maps to exit
codes and the HTTP service maps to status codes and JSON error envelopes.
"""

from __future__ import annotations


class GaztrackError(Exception):
    """Base class for all domain errors raised by this package."""

    code = "error"

    def detail(self) -> dict:
        """Structured payload for error envelopes; subclasses extend it."""
        return {}


class MalformedRecord(GaztrackError):
    """An input record could not be parsed or fails basic validation."""

    code = "malformed_record"

    def __init__(self, message: str, *, source: str = "", line: int | None = None):
        super().__init__(message)
        self.source = source
        self.line = line

    def detail(self) -> dict:
        return {"source": self.source, "line": self.line}


class DuplicateId(GaztrackError):
    code = "duplicate_id"

    def __init__(self, doc_id: str):
        super().__init__(f"duplicate id: {doc_id!r}")
        self.doc_id = doc_id

    def detail(self) -> dict:
        return {"id": self.doc_id}


class RuleSyntaxError(GaztrackError):
    """Parse failure in a rule file, with 1-based position information."""

    code = "rule_syntax"

    def __init__(self, line: int, column: int, expected: str, found: str):
        super().__init__(
            f"line {line}, column {column}: expected {expected}, found {found}"
        )
        self.line = line
        self.column = column
        self.expected = expected
        self.found = found

    def detail(self) -> dict:
        return {
            "line": self.line,
            "column": self.column,
            "expected": self.expected,
            "found": self.found,
        }


class DuplicateTheme(GaztrackError):
    code = "duplicate_theme"

    def __init__(self, name: str):
        super().__init__(f"theme defined twice: {name!r}")
        self.name = name

    def detail(self) -> dict:
        return {"theme": self.name}


class UnknownClass(GaztrackError):
    code = "unknown_class"

    def __init__(self, value: str, row: int | None = None):
        where = f" (row {row})" if row is not None else ""
        super().__init__(f"unknown class label {value!r}{where}")
        self.value = value
        self.row = row

    def detail(self) -> dict:
        return {"value": self.value, "row": self.row}


class MissingField(GaztrackError):
    code = "missing_field"

    def __init__(self, column: str, row: int | None = None):
        where = f" (row {row})" if row is not None else ""
        super().__init__(f"missing or empty field {column!r}{where}")
        self.column = column
        self.row = row

    def detail(self) -> dict:
        return {"column": self.column, "row": self.row}


class BadDate(GaztrackError):
    code = "bad_date"

    def __init__(self, value: str, row: int | None = None):
        where = f" (row {row})" if row is not None else ""
        super().__init__(f"invalid date {value!r}{where}")
        self.value = value
        self.row = row

    def detail(self) -> dict:
        return {"value": self.value, "row": self.row}


class EmptyDataset(GaztrackError):
    code = "empty_dataset"

    def __init__(self, message: str = "no records to process"):
        super().__init__(message)


class EmptyVocabulary(GaztrackError):
    code = "empty_vocabulary"

    def __init__(self, min_df: int):
        super().__init__(f"no token reaches document frequency {min_df}")
        self.min_df = min_df


class NoExamples(GaztrackError):
    code = "no_examples"

    def __init__(self, message: str = "no training examples"):
        super().__init__(message)


class ZeroAlpha(GaztrackError):
    code = "zero_alpha"

    def __init__(self, alpha: float):
        super().__init__(f"smoothing alpha must be > 0, got {alpha}")
        self.alpha = alpha


class BadK(GaztrackError):
    code = "bad_k"

    def __init__(self, k: int, n: int):
        super().__init__(f"fold count k={k} invalid for {n} records (need 2 <= k <= n)")
        self.k = k
        self.n = n


class EmptyMatrix(GaztrackError):
    code = "empty_matrix"

    def __init__(self):
        super().__init__("confusion matrix has no observations")


class MissingPrediction(GaztrackError):
    code = "missing_prediction"

    def __init__(self, record_id: str):
        super().__init__(f"no prediction for record {record_id!r}")
        self.record_id = record_id

    def detail(self) -> dict:
        return {"record_id": self.record_id}


class DuplicateDocument(GaztrackError):
    code = "duplicate_document"

    def __init__(self, doc_id: str):
        super().__init__(f"document already in store: {doc_id!r}")
        self.doc_id = doc_id

    def detail(self) -> dict:
        return {"doc_id": self.doc_id}


class UnknownItem(GaztrackError):
    code = "not_found"

    def __init__(self, item_id: str):
        super().__init__(f"no review item with id {item_id!r}")
        self.item_id = item_id

    def detail(self) -> dict:
        return {"item_id": self.item_id}


class NotPending(GaztrackError):
    code = "not_pending"

    def __init__(self, item_id: str, status: str):
        super().__init__(f"item {item_id!r} is {status}, not pending")
        self.item_id = item_id
        self.status = status

    def detail(self) -> dict:
        return {"item_id": self.item_id, "status": self.status}


class EmptyField(GaztrackError):
    code = "empty_field"

    def __init__(self, field: str):
        super().__init__(f"field {field!r} is empty after normalization")
        self.field = field

    def detail(self) -> dict:
        return {"field": self.field}


class InsufficientFeedback(GaztrackError):
    code = "insufficient_feedback"

    def __init__(self, message: str = "need at least one agreeing and one disagreeing review"):
        super().__init__(message)


class StoreCorrupt(GaztrackError):
    code = "store_corrupt"

    def __init__(self, path: str, reason: str):
        super().__init__(f"store file {path} is corrupt: {reason}")
        self.path = path
        self.reason = reason
