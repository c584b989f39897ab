"""Durable single-directory state for the review loop.

Holds ingested documents, the review queue, accumulated tracker records,
the current classifier artifact, and the rule-set version last used for
routing. Layout on disk::

    <root>/snapshot.json    full state at the last compaction
    <root>/journal.jsonl    one JSON object per committed operation since

Every mutation is appended to the journal (flush + fsync) before memory
is updated; reloading replays the journal over the snapshot, dropping at
most a torn final line. ``snapshot()`` compacts: the snapshot is written
to a temp file, fsynced, renamed into place, and the journal truncated.
All mutations serialize through one in-process lock.
"""

from __future__ import annotations

import enum
import json
import os
import threading
from dataclasses import dataclass, replace
from datetime import datetime, timezone
from pathlib import Path

from .dataset import (
    FineClass,
    GatRecord,
    GroupClass,
    parse_fine_class,
    parse_group_class,
)
from .errors import (
    DuplicateDocument,
    NotPending,
    StoreCorrupt,
    UnknownItem,
)
from .features import Vocabulary, tokenize, vectorize
from .ingest import RawDocument
from .naive_bayes import NbModel, model_from_payload, model_to_payload, predict_nb
from .rules import RuleSet, pre_classify

SNAPSHOT_NAME = "snapshot.json"
JOURNAL_NAME = "journal.jsonl"
STORE_FORMAT = "gaztrack-store"
STORE_VERSION = 1


class ReviewStatus(enum.Enum):
    PENDING = "pending"
    REVIEWED = "reviewed"
    DISCARDED = "discarded"


@dataclass(frozen=True)
class Annotation:
    action: str
    circumstance: str
    fine_class: FineClass

    def to_dict(self) -> dict:
        return {
            "action": self.action,
            "circumstance": self.circumstance,
            "classification": self.fine_class.value,
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "Annotation":
        return cls(
            action=payload["action"],
            circumstance=payload["circumstance"],
            fine_class=parse_fine_class(payload["classification"]),
        )


@dataclass(frozen=True)
class ReviewItem:
    item_id: str
    doc: RawDocument
    matched_themes: tuple[str, ...]
    robot_group_hint: GroupClass | None
    status: ReviewStatus = ReviewStatus.PENDING
    annotation: Annotation | None = None
    reviewed_at: str | None = None

    def to_dict(self) -> dict:
        return {
            "item_id": self.item_id,
            "doc": self.doc.to_dict(),
            "matched_themes": list(self.matched_themes),
            "robot_group_hint": (
                self.robot_group_hint.value if self.robot_group_hint else None
            ),
            "status": self.status.value,
            "annotation": self.annotation.to_dict() if self.annotation else None,
            "reviewed_at": self.reviewed_at,
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "ReviewItem":
        hint = payload.get("robot_group_hint")
        annotation = payload.get("annotation")
        return cls(
            item_id=payload["item_id"],
            doc=RawDocument.from_dict(payload["doc"]),
            matched_themes=tuple(payload["matched_themes"]),
            robot_group_hint=parse_group_class(hint) if hint else None,
            status=ReviewStatus(payload["status"]),
            annotation=Annotation.from_dict(annotation) if annotation else None,
            reviewed_at=payload.get("reviewed_at"),
        )


def _queue_key(item: ReviewItem) -> tuple:
    return (item.doc.published_at, item.doc.doc_id)


class Store:
    """Single-writer persistent state; see module docstring for layout."""

    def __init__(self, root: str | Path):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        self._lock = threading.RLock()
        self._documents: dict[str, RawDocument] = {}
        self._items: dict[str, ReviewItem] = {}
        self._records: list[GatRecord] = []
        self._model_payload: dict | None = None
        self._model: tuple[NbModel, Vocabulary] | None = None
        self._rules_version: str | None = None
        self._replay()
        self._journal = open(
            self.root / JOURNAL_NAME, "a", encoding="utf-8", newline="\n"
        )

    # -- loading ------------------------------------------------------------

    def _replay(self) -> None:
        snap_path = self.root / SNAPSHOT_NAME
        if snap_path.exists():
            try:
                snap = json.loads(snap_path.read_text(encoding="utf-8"))
            except ValueError as exc:
                raise StoreCorrupt(str(snap_path), f"unparseable snapshot: {exc}")
            if snap.get("format") != STORE_FORMAT or snap.get("version") != STORE_VERSION:
                raise StoreCorrupt(str(snap_path), "unknown snapshot format")
            self._load_snapshot(snap)
        journal_path = self.root / JOURNAL_NAME
        if journal_path.exists():
            lines = journal_path.read_text(encoding="utf-8").split("\n")
            if lines and lines[-1] == "":
                lines.pop()
            for i, line in enumerate(lines):
                try:
                    op = json.loads(line)
                except ValueError:
                    if i == len(lines) - 1:
                        break  # torn final write from a crash; discard
                    raise StoreCorrupt(
                        str(journal_path), f"unparseable entry at line {i + 1}"
                    )
                self._apply(op)

    def _load_snapshot(self, snap: dict) -> None:
        self._documents = {
            d["doc_id"]: RawDocument.from_dict(d) for d in snap["documents"]
        }
        self._items = {
            it["item_id"]: ReviewItem.from_dict(it) for it in snap["items"]
        }
        self._records = [GatRecord.from_dict(r) for r in snap["records"]]
        self._rules_version = snap.get("rules_version")
        self._set_model_payload(snap.get("model"))

    def _set_model_payload(self, payload: dict | None) -> None:
        self._model_payload = payload
        self._model = model_from_payload(payload) if payload else None

    def _apply(self, op: dict) -> None:
        kind = op.get("op")
        if kind == "enqueue":
            for d in op["documents"]:
                doc = RawDocument.from_dict(d)
                self._documents[doc.doc_id] = doc
            for it in op["items"]:
                item = ReviewItem.from_dict(it)
                self._items[item.item_id] = item
            if op.get("rules_version"):
                self._rules_version = op["rules_version"]
        elif kind == "review":
            item = self._items[op["item_id"]]
            record = GatRecord.from_dict(op["record"])
            self._items[item.item_id] = replace(
                item,
                status=ReviewStatus.REVIEWED,
                annotation=Annotation.from_dict(op["annotation"]),
                reviewed_at=op["reviewed_at"],
            )
            self._records.append(record)
        elif kind == "discard":
            item = self._items[op["item_id"]]
            self._items[item.item_id] = replace(item, status=ReviewStatus.DISCARDED)
        elif kind == "import":
            self._records.extend(GatRecord.from_dict(r) for r in op["records"])
        elif kind == "model":
            self._set_model_payload(op.get("payload"))
        else:
            raise StoreCorrupt(
                str(self.root / JOURNAL_NAME), f"unknown operation {kind!r}"
            )

    # -- committing ---------------------------------------------------------

    def _commit(self, op: dict) -> None:
        """Append one journalled operation, durably, then apply it."""
        line = json.dumps(op, ensure_ascii=False)
        self._journal.write(line + "\n")
        self._journal.flush()
        os.fsync(self._journal.fileno())
        self._apply(op)

    def snapshot(self) -> None:
        """Fold the journal into a fresh snapshot and truncate it."""
        with self._lock:
            snap = {
                "format": STORE_FORMAT,
                "version": STORE_VERSION,
                "documents": [d.to_dict() for d in self._documents.values()],
                "items": [it.to_dict() for it in self._items.values()],
                "records": [r.to_dict() for r in self._records],
                "model": self._model_payload,
                "rules_version": self._rules_version,
            }
            tmp = self.root / (SNAPSHOT_NAME + ".tmp")
            with open(tmp, "w", encoding="utf-8") as fh:
                json.dump(snap, fh, ensure_ascii=False)
                fh.flush()
                os.fsync(fh.fileno())
            os.replace(tmp, self.root / SNAPSHOT_NAME)
            dir_fd = os.open(self.root, os.O_RDONLY)
            try:
                os.fsync(dir_fd)
            finally:
                os.close(dir_fd)
            # O_APPEND keeps the long-lived handle valid after truncation.
            with open(self.root / JOURNAL_NAME, "w"):
                pass

    def close(self) -> None:
        with self._lock:
            if not self._journal.closed:
                self._journal.flush()
                self._journal.close()

    def __enter__(self) -> "Store":
        return self

    def __exit__(self, *exc_info) -> None:
        self.close()

    # -- operations ---------------------------------------------------------

    def enqueue(
        self,
        docs: list[RawDocument],
        rules: RuleSet,
        model: tuple[NbModel, Vocabulary] | None = None,
    ) -> list[ReviewItem]:
        """Route documents through the rules; queue those matching a theme.

        Documents that match nothing are still remembered (and counted as
        duplicates on re-ingest) but produce no review item. The group
        hint comes from the supplied model, falling back to the store's
        current one.
        """
        with self._lock:
            for doc in docs:
                if doc.doc_id in self._documents:
                    raise DuplicateDocument(doc.doc_id)
            scorer = model or self._model
            items: list[ReviewItem] = []
            for doc in docs:
                themes = pre_classify(rules, doc)
                if not themes:
                    continue
                hint = None
                if scorer is not None:
                    nb, vocab = scorer
                    hint = predict_nb(nb, vectorize(tokenize(doc.body), vocab))[0]
                items.append(
                    ReviewItem(
                        item_id=doc.doc_id,
                        doc=doc,
                        matched_themes=tuple(themes),
                        robot_group_hint=hint,
                    )
                )
            self._commit(
                {
                    "op": "enqueue",
                    "documents": [d.to_dict() for d in docs],
                    "items": [it.to_dict() for it in items],
                    "rules_version": rules.version,
                }
            )
            return [self._items[it.item_id] for it in items]

    def submit_review(
        self,
        item_id: str,
        action: str,
        circumstance: str,
        fine_class: FineClass | str,
    ) -> GatRecord:
        """Attach the expert's annotation; the tracker gains one record.

        The record takes the document's date and the first matched theme;
        its id is the item id.
        """
        with self._lock:
            item = self._items.get(item_id)
            if item is None:
                raise UnknownItem(item_id)
            if item.status is not ReviewStatus.PENDING:
                raise NotPending(item_id, item.status.value)
            fine = (
                fine_class
                if isinstance(fine_class, FineClass)
                else parse_fine_class(fine_class)
            )
            record = GatRecord.build(
                record_id=item_id,
                date=item.doc.published_at,
                theme=item.matched_themes[0],
                action=action,
                circumstance=circumstance,
                fine_class=fine,
            )
            annotation = Annotation(
                action=record.action,
                circumstance=record.circumstance,
                fine_class=fine,
            )
            self._commit(
                {
                    "op": "review",
                    "item_id": item_id,
                    "annotation": annotation.to_dict(),
                    "reviewed_at": datetime.now(timezone.utc).isoformat(
                        timespec="seconds"
                    ),
                    "record": record.to_dict(),
                }
            )
            return record

    def discard(self, item_id: str) -> ReviewItem:
        """Drop a false-positive routing from the queue without a record."""
        with self._lock:
            item = self._items.get(item_id)
            if item is None:
                raise UnknownItem(item_id)
            if item.status is not ReviewStatus.PENDING:
                raise NotPending(item_id, item.status.value)
            self._commit({"op": "discard", "item_id": item_id})
            return self._items[item_id]

    def import_records(self, records: list[GatRecord]) -> int:
        """Seed the tracker with pre-existing records (e.g. a published CSV)."""
        with self._lock:
            self._commit(
                {"op": "import", "records": [r.to_dict() for r in records]}
            )
            return len(records)

    def set_model(self, model: NbModel, vocab: Vocabulary) -> None:
        with self._lock:
            self._commit({"op": "model", "payload": model_to_payload(model, vocab)})

    # -- reads --------------------------------------------------------------

    def get_item(self, item_id: str) -> ReviewItem:
        with self._lock:
            item = self._items.get(item_id)
            if item is None:
                raise UnknownItem(item_id)
            return item

    def items(
        self, status: ReviewStatus | None = None, limit: int | None = None
    ) -> list[ReviewItem]:
        """Queue view: publication date ascending, then document id."""
        with self._lock:
            chosen = [
                it
                for it in self._items.values()
                if status is None or it.status is status
            ]
        chosen.sort(key=_queue_key)
        return chosen[:limit] if limit is not None else chosen

    def pending_items(self, limit: int | None = None) -> list[ReviewItem]:
        return self.items(ReviewStatus.PENDING, limit)

    def all_records(self) -> list[GatRecord]:
        with self._lock:
            return list(self._records)

    def document_count(self) -> int:
        with self._lock:
            return len(self._documents)

    @property
    def model(self) -> tuple[NbModel, Vocabulary] | None:
        with self._lock:
            return self._model

    @property
    def rules_version(self) -> str | None:
        with self._lock:
            return self._rules_version
