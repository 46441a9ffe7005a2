"""Exception hierarchy.

Every domain error carries a machine-readable ``code`` and a suggested
HTTP status so the CLI and the service map failures uniformly.
"""

from __future__ import annotations


class KbError(Exception):
    code = "kb-error"
    http_status = 500

    def __init__(self, message: str, detail: object = None):
        super().__init__(message)
        self.detail = detail


class MalformedTermError(KbError):
    code = "malformed-term"
    http_status = 400


class MalformedTripleError(KbError):
    code = "malformed-triple"
    http_status = 400


class UnknownPrefixError(KbError):
    code = "unknown-prefix"
    http_status = 400


class QuerySyntaxError(KbError):
    """Positioned syntax error in a query or Turtle document."""

    code = "syntax-error"
    http_status = 400

    def __init__(self, message: str, line: int, column: int, expected: tuple[str, ...] = ()):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column
        self.expected = expected


class TurtleSyntaxError(QuerySyntaxError):
    pass


class UnknownLevelError(KbError):
    code = "unknown-level"
    http_status = 400


class SubCompetenceCycleError(KbError):
    code = "cycle-detected"
    http_status = 400


class IterationCapError(KbError):
    code = "iteration-cap-exceeded"
    http_status = 500


class MissingEmissionDateError(KbError):
    code = "missing-emission-date"
    http_status = 400


class DateParseError(KbError):
    code = "unparseable-date"
    http_status = 400


class DurationParseError(KbError):
    code = "unparseable-duration"
    http_status = 400


class UnknownProfileError(KbError):
    code = "unknown-profile"
    http_status = 404


class UnknownOccupationError(KbError):
    code = "unknown-occupation"
    http_status = 404


class UnknownTrainingError(KbError):
    code = "unknown-training"
    http_status = 404


class UnknownSessionError(KbError):
    code = "unknown-session"
    http_status = 404


class PrerequisiteUnmetError(KbError):
    code = "prerequisite-unmet"
    http_status = 422

    def __init__(self, message: str, unmet: tuple[str, ...]):
        super().__init__(message, detail=list(unmet))
        self.unmet = unmet


class PrerequisiteCycleError(KbError):
    code = "prerequisite-cycle"
    http_status = 400


class EmptyCatalogError(KbError):
    code = "empty-catalog"
    http_status = 400


class MalformedRowError(KbError):
    code = "malformed-row"
    http_status = 400

    def __init__(self, line: int, reason: str):
        super().__init__(f"row {line}: {reason}")
        self.line = line
        self.reason = reason


class EmptyKeyError(KbError):
    code = "empty-key"
    http_status = 400


class NoKnowledgeBaseError(KbError):
    code = "no-knowledge-base"
    http_status = 409
