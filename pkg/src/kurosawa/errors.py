"""Exception hierarchy and the issue/report types shared by every module.

Every error carries a stable ``code`` string so the CLI and HTTP layers can
echo machine-readable error identifiers without string-matching messages.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


class KurosawaError(Exception):
    """Base class for all workbench errors."""

    code = "Error"

    def detail(self) -> dict[str, Any]:
        """Structured payload echoed by the CLI/HTTP layers."""
        return {}

    def as_issue(self) -> "Issue":
        return Issue(code=self.code, message=str(self), detail=self.detail())


# ---------------------------------------------------------------------------
# script parsing / tagged format

class EmptyInputError(KurosawaError):
    code = "EmptyInput"


class NoElementsError(KurosawaError):
    code = "NoElements"


class UnsupportedElementError(KurosawaError):
    code = "UnsupportedElement"

    def __init__(self, kind: str):
        super().__init__(f"element kind {kind!r} has no tag mapping")
        self.kind = kind

    def detail(self) -> dict[str, Any]:
        return {"kind": self.kind}


class UnbalancedTagsError(KurosawaError):
    code = "UnbalancedTags"

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (byte offset {offset})")
        self.offset = offset

    def detail(self) -> dict[str, Any]:
        return {"offset": self.offset}


class StrayTextError(KurosawaError):
    code = "StrayText"

    def __init__(self, snippet: str, offset: int):
        super().__init__(f"text outside tags at byte offset {offset}: {snippet!r}")
        self.snippet = snippet
        self.offset = offset

    def detail(self) -> dict[str, Any]:
        return {"snippet": self.snippet, "offset": self.offset}


class EmptyElementError(KurosawaError):
    code = "EmptyElement"

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (byte offset {offset})")
        self.offset = offset

    def detail(self) -> dict[str, Any]:
        return {"offset": self.offset}


# ---------------------------------------------------------------------------
# plot annotation

class InvalidBoundariesError(KurosawaError):
    code = "InvalidBoundaries"


class MissingTagError(KurosawaError):
    code = "MissingTag"

    def __init__(self, tag: str):
        super().__init__(f"act tag <{tag}> not found")
        self.tag = tag

    def detail(self) -> dict[str, Any]:
        return {"tag": self.tag}


class DuplicateTagError(KurosawaError):
    code = "DuplicateTag"

    def __init__(self, tag: str):
        super().__init__(f"act tag <{tag}> appears more than once")
        self.tag = tag

    def detail(self) -> dict[str, Any]:
        return {"tag": self.tag}


class OutOfOrderTagsError(KurosawaError):
    code = "OutOfOrderTags"

    def __init__(self) -> None:
        super().__init__("act tags are not in canonical order (one, two-a, two-b, three)")


class EmptyActError(KurosawaError):
    code = "EmptyAct"

    def __init__(self, act: str):
        super().__init__(f"act {act!r} has no text")
        self.act = act

    def detail(self) -> dict[str, Any]:
        return {"act": self.act}


class GenresRequiredError(KurosawaError):
    code = "GenresRequired"


class GenresForbiddenError(KurosawaError):
    code = "GenresForbidden"


# ---------------------------------------------------------------------------
# metrics

class LengthMismatchError(KurosawaError):
    code = "LengthMismatch"


class EmptyCorpusError(KurosawaError):
    code = "EmptyCorpus"


class EmptySequenceError(KurosawaError):
    code = "EmptySequence"


class EmptyListError(KurosawaError):
    code = "EmptyList"


class PositiveLogProbError(KurosawaError):
    code = "PositiveLogProb"


class NoEligibleDocsError(KurosawaError):
    code = "NoEligibleDocs"


class EmptyRatingsError(KurosawaError):
    code = "EmptyRatings"


class OutOfRangeScoreError(KurosawaError):
    code = "OutOfRangeScore"


# ---------------------------------------------------------------------------
# dataset

class DuplicateIdError(KurosawaError):
    code = "DuplicateId"

    def __init__(self, record_id: str):
        super().__init__(f"record id {record_id!r} already present")
        self.record_id = record_id

    def detail(self) -> dict[str, Any]:
        return {"id": self.record_id}


class UnknownIdError(KurosawaError):
    code = "UnknownId"

    def __init__(self, record_id: str):
        super().__init__(f"no item with id {record_id!r}")
        self.record_id = record_id

    def detail(self) -> dict[str, Any]:
        return {"id": self.record_id}


class TargetParseFailureError(KurosawaError):
    code = "TargetParseFailure"

    def __init__(self, cause: KurosawaError):
        super().__init__(f"target text failed to parse: {cause}")
        self.cause = cause

    def detail(self) -> dict[str, Any]:
        return {"cause": self.cause.code, **self.cause.detail()}


class LengthViolationError(KurosawaError):
    code = "LengthViolation"

    def __init__(self, count: int, lo: int, hi: int, what: str = "storyline"):
        super().__init__(f"{what} word count {count} outside [{lo}, {hi}]")
        self.count = count
        self.lo = lo
        self.hi = hi
        self.what = what

    def detail(self) -> dict[str, Any]:
        return {"count": self.count, "min": self.lo, "max": self.hi, "what": self.what}


class UnknownGenreError(KurosawaError):
    code = "UnknownGenre"

    def __init__(self, name: str):
        super().__init__(f"genre {name!r} not in the active vocabulary")
        self.name = name

    def detail(self) -> dict[str, Any]:
        return {"name": self.name}


class MissingLongStorylineError(KurosawaError):
    code = "MissingLongStoryline"

    def __init__(self, record_id: str):
        super().__init__(f"no long storyline for {record_id!r}")
        self.record_id = record_id

    def detail(self) -> dict[str, Any]:
        return {"id": self.record_id}


class MissingGenresError(KurosawaError):
    code = "MissingGenres"

    def __init__(self, record_id: str):
        super().__init__(f"record {record_id!r} has no genres")
        self.record_id = record_id

    def detail(self) -> dict[str, Any]:
        return {"id": self.record_id}


class ManifestParseError(KurosawaError):
    code = "ManifestParse"


# ---------------------------------------------------------------------------
# generation backends

class ContextOverflowError(KurosawaError):
    code = "ContextOverflow"

    def __init__(self, estimated: int, limit: int):
        super().__init__(f"estimated {estimated} tokens exceeds context limit {limit}")
        self.estimated = estimated
        self.limit = limit

    def detail(self) -> dict[str, Any]:
        return {"estimated": self.estimated, "limit": self.limit}


class BackendUnavailableError(KurosawaError):
    code = "BackendUnavailable"

    def __init__(self, cause: str):
        super().__init__(f"completion backend unavailable: {cause}")
        self.cause = cause

    def detail(self) -> dict[str, Any]:
        return {"cause": self.cause}


class BackendRejectedError(KurosawaError):
    code = "BackendRejected"

    def __init__(self, status: int, message: str):
        super().__init__(f"backend rejected request ({status}): {message}")
        self.status = status
        self.backend_message = message

    def detail(self) -> dict[str, Any]:
        return {"status": self.status, "message": self.backend_message}


class BackendTimeoutError(KurosawaError):
    code = "Timeout"


# ---------------------------------------------------------------------------
# storage

class CorruptRecordError(KurosawaError):
    code = "CorruptRecord"

    def __init__(self, path: str, line_no: int):
        super().__init__(f"corrupt record at {path}:{line_no}")
        self.path = path
        self.line_no = line_no

    def detail(self) -> dict[str, Any]:
        return {"path": self.path, "line_no": self.line_no}


class StorageFullError(KurosawaError):
    code = "StorageFull"


# ---------------------------------------------------------------------------
# issues and reports

@dataclass(frozen=True)
class Issue:
    """A single validation finding: machine code, human message, structured detail."""

    code: str
    message: str
    detail: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        return {"code": self.code, "message": self.message, "detail": self.detail}


@dataclass
class ValidationReport:
    """Errors block acceptance of a document; warnings do not."""

    errors: list[Issue] = field(default_factory=list)
    warnings: list[Issue] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.errors

    def add_error(self, issue: Issue) -> None:
        self.errors.append(issue)

    def add_warning(self, issue: Issue) -> None:
        self.warnings.append(issue)

    def extend(self, other: "ValidationReport") -> None:
        self.errors.extend(other.errors)
        self.warnings.extend(other.warnings)

    def to_dict(self) -> dict[str, Any]:
        return {
            "ok": self.ok,
            "errors": [i.to_dict() for i in self.errors],
            "warnings": [i.to_dict() for i in self.warnings],
        }


def issue(code: str, message: str, **detail: Any) -> Issue:
    return Issue(code=code, message=message, detail=dict(detail))
