"""Parallel dataset assembly, validation, statistics, and fine-tune export.

A dataset pairs storylines with annotated plots (or scene descriptions with
tagged scenes).  Records are validated on insert, persisted as line-delimited
JSON, and exported as prompt/completion pairs for hosted fine-tuning.
"""

from __future__ import annotations

import csv
import io
import json
import random
from dataclasses import dataclass, field, replace
from enum import Enum
from pathlib import Path

from .errors import (
    DuplicateIdError,
    EmptyCorpusError,
    Issue,
    KurosawaError,
    LengthViolationError,
    ManifestParseError,
    MissingGenresError,
    MissingLongStorylineError,
    TargetParseFailureError,
    UnknownGenreError,
    issue,
)
from .model import DEFAULT_GENRES, Genre, canonical_genre, word_count
from .plots import (
    LONG_STORYLINE_WORDS,
    PROMPT_SEPARATOR,
    SHORT_STORYLINE_WORDS,
    STOP_SEQUENCE,
    GenerationProfile,
    StorylineKind,
    build_prompt,
    parse_acts,
    strip_act_tags,
)
from .screenplay import decode_tagged

__all__ = [
    "Dataset",
    "DatasetRecord",
    "FinetuneFormat",
    "FinetuneRecord",
    "ImportReport",
    "RecordKind",
    "export_finetune",
    "genre_distribution",
    "import_corpus",
    "load_dataset",
    "prepare_record",
    "save_dataset",
    "split_dataset",
    "validate_record",
    "write_finetune_jsonl",
]


class RecordKind(str, Enum):
    PLOT = "plot"
    SCENE = "scene"


@dataclass(frozen=True)
class DatasetRecord:
    """One storyline→target pair.

    For plot records the target is an act-annotated plot; for scene records
    it is a tagged scene and the storyline field carries the description.
    """

    id: str
    kind: RecordKind
    storyline: str
    target_text: str
    genres: tuple[Genre, ...] = ()
    long_storyline: str | None = None
    source_note: str | None = None

    def __post_init__(self) -> None:
        if not self.id.strip():
            raise ValueError("record id must be non-empty")
        if not isinstance(self.kind, RecordKind):
            object.__setattr__(self, "kind", RecordKind(self.kind))
        if not isinstance(self.genres, tuple):
            object.__setattr__(self, "genres", tuple(self.genres))

    def to_dict(self) -> dict:
        d = {
            "id": self.id,
            "kind": self.kind.value,
            "storyline": self.storyline,
            "target_text": self.target_text,
            "genres": list(self.genres),
        }
        if self.long_storyline is not None:
            d["long_storyline"] = self.long_storyline
        if self.source_note is not None:
            d["source_note"] = self.source_note
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "DatasetRecord":
        return cls(
            id=str(d["id"]),
            kind=RecordKind(d["kind"]),
            storyline=d["storyline"],
            target_text=d["target_text"],
            genres=tuple(d.get("genres") or ()),
            long_storyline=d.get("long_storyline"),
            source_note=d.get("source_note"),
        )


def validate_record(
    record: DatasetRecord,
    vocabulary: tuple[Genre, ...] = DEFAULT_GENRES,
) -> tuple[DatasetRecord, list[Issue]]:
    """Run invariant checks; hard failures raise, soft ones come back as warnings.

    Genres are canonicalized against the vocabulary (case-insensitive); a name
    with no canonical form stays as given and yields an UnknownGenre warning,
    which strict insert mode escalates.  Target texts must parse for the
    record kind in both modes.
    """
    if not record.storyline.strip():
        raise ValueError("storyline must be non-empty")
    if not record.target_text.strip():
        raise ValueError("target text must be non-empty")

    try:
        if record.kind is RecordKind.PLOT:
            parse_acts(record.target_text)
        else:
            decode_tagged(record.target_text, strict=True)
    except KurosawaError as exc:
        raise TargetParseFailureError(exc) from exc

    warnings: list[Issue] = []

    canon: list[Genre] = []
    for name in record.genres:
        match = canonical_genre(name, vocabulary)
        if match is None:
            warnings.append(issue(
                "UnknownGenre",
                f"genre {name!r} not in the active vocabulary",
                name=name,
            ))
            canon.append(name)
        else:
            canon.append(match)
    if tuple(canon) != record.genres:
        record = replace(record, genres=tuple(canon))

    lo, hi = SHORT_STORYLINE_WORDS
    count = word_count(record.storyline)
    if not lo <= count <= hi:
        warnings.append(issue(
            "LengthViolation",
            f"storyline is {count} words, expected {lo}-{hi}",
            count=count, min=lo, max=hi, what="storyline",
        ))
    if record.long_storyline is not None:
        lo, hi = LONG_STORYLINE_WORDS
        count = word_count(record.long_storyline)
        if not lo <= count <= hi:
            warnings.append(issue(
                "LengthViolation",
                f"long storyline is {count} words, expected {lo}-{hi}",
                count=count, min=lo, max=hi, what="long_storyline",
            ))

    return record, warnings


@dataclass
class Dataset:
    """Append-ordered record collection with per-record insert warnings."""

    name: str = ""
    records: list[DatasetRecord] = field(default_factory=list)
    warnings: dict[str, list[Issue]] = field(default_factory=dict)
    vocabulary: tuple[Genre, ...] = DEFAULT_GENRES

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    def ids(self) -> set[str]:
        return {r.id for r in self.records}

    def get(self, record_id: str) -> DatasetRecord | None:
        for r in self.records:
            if r.id == record_id:
                return r
        return None

    def add(self, record: DatasetRecord, mode: str = "lenient") -> list[Issue]:
        """Validate and append; returns the warnings recorded for the record.

        Strict mode admits exactly the records lenient mode admits
        warning-free, raising on the first would-be warning instead.
        """
        if any(r.id == record.id for r in self.records):
            raise DuplicateIdError(record.id)
        record, warnings = prepare_record(record, self.vocabulary, mode)
        self.records.append(record)
        if warnings:
            self.warnings[record.id] = warnings
        return warnings


def prepare_record(
    record: DatasetRecord,
    vocabulary: tuple[Genre, ...] = DEFAULT_GENRES,
    mode: str = "lenient",
) -> tuple[DatasetRecord, list[Issue]]:
    """Validation plus strict-mode escalation, without touching any dataset."""
    if mode not in ("strict", "lenient"):
        raise ValueError(f"unknown mode {mode!r}")
    record, warnings = validate_record(record, vocabulary)
    if mode == "strict" and warnings:
        first = warnings[0]
        if first.code == "LengthViolation":
            raise LengthViolationError(
                first.detail["count"], first.detail["min"],
                first.detail["max"], first.detail["what"],
            )
        if first.code == "UnknownGenre":
            raise UnknownGenreError(first.detail["name"])
        raise KurosawaError(first.message)
    return record, warnings


def add_record(dataset: Dataset, record: DatasetRecord, mode: str = "lenient") -> Dataset:
    dataset.add(record, mode)
    return dataset


def genre_distribution(dataset: Dataset) -> dict[Genre, int]:
    """Histogram of genre occurrences, descending by count with name tiebreak."""
    counts: dict[Genre, int] = {}
    for record in dataset.records:
        for genre in record.genres:
            counts[genre] = counts.get(genre, 0) + 1
    ordered = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
    return dict(ordered)


# ---------------------------------------------------------------------------
# fine-tune export

@dataclass(frozen=True)
class FinetuneFormat:
    """Delimiters stamped into every export; recorded in the file header."""

    separator: str = PROMPT_SEPARATOR
    stop: str = STOP_SEQUENCE

    def __post_init__(self) -> None:
        if not self.separator:
            raise ValueError("separator must be non-empty")
        if not self.stop:
            raise ValueError("stop sequence must be non-empty")


@dataclass(frozen=True)
class FinetuneRecord:
    prompt: str
    completion: str


def _record_storyline(record: DatasetRecord, profile: GenerationProfile) -> str:
    if profile.storyline_kind is StorylineKind.LONG:
        if record.long_storyline is None:
            raise MissingLongStorylineError(record.id)
        return record.long_storyline
    return record.storyline


def export_finetune(
    dataset: Dataset,
    profile: GenerationProfile,
    fmt: FinetuneFormat = FinetuneFormat(),
) -> list[FinetuneRecord]:
    """Build one prompt/completion pair per record, in dataset order.

    Profile O exports the target with act tags stripped; all other profiles
    keep the target verbatim.  The completion gains a single leading space
    and the configured stop sequence.
    """
    if not dataset.records:
        raise EmptyCorpusError("dataset has no records")
    out: list[FinetuneRecord] = []
    for record in dataset.records:
        storyline = _record_storyline(record, profile)
        genres = list(record.genres) if profile.genres_included else []
        if profile.genres_included and not record.genres:
            raise MissingGenresError(record.id)
        prompt = build_prompt(storyline, genres, profile, separator=fmt.separator)
        target = record.target_text
        if profile is GenerationProfile.O and record.kind is RecordKind.PLOT:
            target = strip_act_tags(target)
        out.append(FinetuneRecord(prompt=prompt, completion=" " + target + fmt.stop))
    return out


def write_finetune_jsonl(
    records: list[FinetuneRecord],
    path: str | Path,
    fmt: FinetuneFormat = FinetuneFormat(),
) -> None:
    """Write prompt/completion JSONL with a header comment naming the delimiters."""
    header = "# finetune export separator={} stop={}".format(
        json.dumps(fmt.separator), json.dumps(fmt.stop),
    )
    lines = [header]
    for rec in records:
        lines.append(json.dumps(
            {"prompt": rec.prompt, "completion": rec.completion},
            ensure_ascii=False,
        ))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_finetune_jsonl(path: str | Path) -> list[FinetuneRecord]:
    out = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if not line.strip() or line.startswith("#"):
            continue
        d = json.loads(line)
        out.append(FinetuneRecord(prompt=d["prompt"], completion=d["completion"]))
    return out


# ---------------------------------------------------------------------------
# persistence

def save_dataset(dataset: Dataset, path: str | Path) -> None:
    """One JSON object per line, append-friendly and diffable."""
    with open(path, "w", encoding="utf-8") as fh:
        for record in dataset.records:
            fh.write(json.dumps(record.to_dict(), ensure_ascii=False) + "\n")


def load_dataset(path: str | Path, name: str = "") -> Dataset:
    path = Path(path)
    dataset = Dataset(name=name or path.stem)
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if not line.strip():
                continue
            dataset.add(DatasetRecord.from_dict(json.loads(line)), mode="lenient")
    return dataset


def split_dataset(dataset: Dataset, train_fraction: float, seed: int) -> tuple[Dataset, Dataset]:
    """Seeded shuffle split; same inputs give the same partition."""
    if not 0.0 < train_fraction < 1.0:
        raise ValueError("train_fraction must be in (0, 1)")
    indices = list(range(len(dataset.records)))
    random.Random(seed).shuffle(indices)
    cut = round(len(indices) * train_fraction)
    train_ids = {indices[i] for i in range(cut)}
    train = Dataset(name=f"{dataset.name}-train", vocabulary=dataset.vocabulary)
    held = Dataset(name=f"{dataset.name}-held", vocabulary=dataset.vocabulary)
    for i, record in enumerate(dataset.records):
        (train if i in train_ids else held).records.append(record)
    return train, held


# ---------------------------------------------------------------------------
# corpus import

MANIFEST_COLUMNS = ("id", "storyline_file", "genres", "target_file", "kind")


@dataclass
class ImportReport:
    accepted: int = 0
    rejected: list[tuple[str, str]] = field(default_factory=list)  # (row id, reason)

    def to_dict(self) -> dict:
        return {
            "accepted": self.accepted,
            "rejected": [{"id": rid, "reason": reason} for rid, reason in self.rejected],
        }


def _read_manifest(manifest_path: Path) -> list[dict]:
    try:
        text = manifest_path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ManifestParseError(f"cannot read manifest: {exc}") from exc
    reader = csv.DictReader(io.StringIO(text))
    headers = reader.fieldnames or []
    missing = [c for c in MANIFEST_COLUMNS if c not in headers]
    if missing:
        raise ManifestParseError(f"manifest missing columns: {', '.join(missing)}")
    return list(reader)


def import_corpus(
    manifest_path: str | Path,
    root: str | Path | None = None,
    name: str = "",
) -> tuple[Dataset, ImportReport]:
    """Build a dataset from a pairing manifest, validating each row strictly.

    Row failures land in the report without aborting the batch.  File columns
    resolve relative to ``root`` (default: the manifest's directory).
    """
    manifest_path = Path(manifest_path)
    base = Path(root) if root is not None else manifest_path.parent
    rows = _read_manifest(manifest_path)
    dataset = Dataset(name=name or manifest_path.stem)
    report = ImportReport()
    for idx, row in enumerate(rows):
        row_id = (row.get("id") or "").strip() or f"row-{idx + 1}"
        try:
            record = _row_to_record(row, base)
            dataset.add(record, mode="strict")
        except (KurosawaError, ValueError, OSError) as exc:
            report.rejected.append((row_id, str(exc)))
            continue
        report.accepted += 1
    return dataset, report


def _row_to_record(row: dict, base: Path) -> DatasetRecord:
    def read_file(column: str, required: bool) -> str | None:
        value = (row.get(column) or "").strip()
        if not value:
            if required:
                raise ValueError(f"manifest row missing {column}")
            return None
        target = base / value
        if not target.is_file():
            raise FileNotFoundError(f"{column} {value!r} not found")
        return target.read_text(encoding="utf-8").strip("\n")

    genres = tuple(
        g.strip() for g in (row.get("genres") or "").split(";") if g.strip()
    )
    return DatasetRecord(
        id=(row.get("id") or "").strip(),
        kind=RecordKind((row.get("kind") or "").strip()),
        storyline=read_file("storyline_file", required=True) or "",
        long_storyline=read_file("long_storyline_file", required=False),
        genres=genres,
        target_text=read_file("target_file", required=True) or "",
    )
