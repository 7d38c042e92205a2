"""Append-only, fsync-durable item store.

One line-delimited JSON file per item kind.  A record is acknowledged only
after its full line is flushed and fsynced, so after a crash the only legal
damage is an unterminated final line, which the startup scan discards as
unacknowledged.  A malformed line anywhere else is real corruption and stops
the scan.
"""

from __future__ import annotations

import errno
import json
import os
import secrets
import threading
import time
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

from ..errors import CorruptRecordError, DuplicateIdError, StorageFullError, UnknownIdError

__all__ = ["ITEM_KINDS", "JsonlStore", "StoredItem", "UlidFactory"]

ITEM_KINDS = ("plot_generation", "scene_generation", "dataset", "rating")

SCHEMA_VERSION = 1

_B32 = "0123456789ABCDEFGHJKMNPQRSTVWXYZ"


def _encode_b32(value: int, length: int) -> str:
    chars = []
    for _ in range(length):
        chars.append(_B32[value & 0x1F])
        value >>= 5
    return "".join(reversed(chars))


class UlidFactory:
    """Sortable 26-char ids: 48-bit millisecond clock + 80-bit randomness.

    Ids issued by one factory are strictly increasing even within the same
    millisecond (the random tail increments), so append order equals id order.
    """

    def __init__(self) -> None:
        self._last_ms = -1
        self._last_rand = 0
        self._lock = threading.Lock()

    def new(self) -> str:
        with self._lock:
            ms = time.time_ns() // 1_000_000
            if ms <= self._last_ms:
                ms = self._last_ms
                self._last_rand = (self._last_rand + 1) % (1 << 80)
            else:
                self._last_ms = ms
                self._last_rand = secrets.randbits(80)
            return _encode_b32(ms, 10) + _encode_b32(self._last_rand, 16)


@dataclass(frozen=True)
class StoredItem:
    id: str
    kind: str
    payload: dict
    created_at: str
    schema_version: int = SCHEMA_VERSION

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "kind": self.kind,
            "payload": self.payload,
            "created_at": self.created_at,
            "schema_version": self.schema_version,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "StoredItem":
        return cls(
            id=d["id"],
            kind=d["kind"],
            payload=d["payload"],
            created_at=d["created_at"],
            schema_version=int(d["schema_version"]),
        )


@dataclass
class RecoveryNote:
    path: str
    discarded_bytes: int


class JsonlStore:
    """Per-kind append-only logs under one data directory."""

    def __init__(self, data_dir: str | Path, kinds: tuple[str, ...] = ITEM_KINDS):
        self.data_dir = Path(data_dir)
        self.data_dir.mkdir(parents=True, exist_ok=True)
        self.kinds = kinds
        self._ulid = UlidFactory()
        self._locks = {kind: threading.Lock() for kind in kinds}
        self._items: dict[str, list[StoredItem]] = {kind: [] for kind in kinds}
        self._by_id: dict[str, StoredItem] = {}
        self.recovery_notes: list[RecoveryNote] = []
        for kind in kinds:
            self._scan(kind)

    def _path(self, kind: str) -> Path:
        return self.data_dir / f"{kind}.jsonl"

    def _scan(self, kind: str) -> None:
        path = self._path(kind)
        if not path.exists():
            return
        data = path.read_bytes()
        pos = 0
        line_no = 0
        while pos < len(data):
            nl = data.find(b"\n", pos)
            if nl == -1:
                # torn final write: never acknowledged, discard
                with open(path, "r+b") as fh:
                    fh.truncate(pos)
                    fh.flush()
                    os.fsync(fh.fileno())
                self.recovery_notes.append(RecoveryNote(str(path), len(data) - pos))
                break
            line = data[pos:nl]
            line_no += 1
            if line.strip():
                try:
                    item = StoredItem.from_dict(json.loads(line))
                except (ValueError, KeyError, TypeError) as exc:
                    raise CorruptRecordError(str(path), line_no) from exc
                if item.id in self._by_id:
                    raise CorruptRecordError(str(path), line_no)
                self._items[kind].append(item)
                self._by_id[item.id] = item
            pos = nl + 1

    def append(self, kind: str, payload: dict) -> StoredItem:
        """Durably persist one item; the returned item is already on disk."""
        if kind not in self._locks:
            raise ValueError(f"unknown item kind {kind!r}")
        with self._locks[kind]:
            item = StoredItem(
                id=self._ulid.new(),
                kind=kind,
                payload=payload,
                created_at=datetime.now(timezone.utc).isoformat(),
            )
            if item.id in self._by_id:
                raise DuplicateIdError(item.id)
            line = json.dumps(item.to_dict(), ensure_ascii=False) + "\n"
            try:
                with open(self._path(kind), "ab") as fh:
                    fh.write(line.encode("utf-8"))
                    fh.flush()
                    os.fsync(fh.fileno())
            except OSError as exc:
                if exc.errno == errno.ENOSPC:
                    raise StorageFullError(str(exc)) from exc
                raise
            self._items[kind].append(item)
            self._by_id[item.id] = item
            return item

    def get(self, item_id: str) -> StoredItem:
        item = self._by_id.get(item_id)
        if item is None:
            raise UnknownIdError(item_id)
        return item

    def list(
        self,
        kind: str,
        cursor: str | None = None,
        limit: int = 50,
    ) -> tuple[list[StoredItem], str | None]:
        """Id-ordered page after ``cursor``; second value is the next cursor."""
        if kind not in self._items:
            raise ValueError(f"unknown item kind {kind!r}")
        if limit < 1:
            raise ValueError("limit must be >= 1")
        items = self._items[kind]
        start = 0
        if cursor is not None:
            while start < len(items) and items[start].id <= cursor:
                start += 1
        page = items[start:start + limit]
        next_cursor = page[-1].id if start + limit < len(items) and page else None
        return page, next_cursor

    def all_items(self, kind: str) -> list[StoredItem]:
        return list(self._items[kind])

    def __len__(self) -> int:
        return len(self._by_id)
