"""Loading and normalization of raw gazette acts.

Acts arrive either as a JSONL export (one act per line) or as a directory
of per-act XML files. Text fields are normalized on load, so downstream
matching and tokenization never see control characters, irregular
whitespace, or mixed Unicode composition forms.
"""

from __future__ import annotations

import json
import re
import unicodedata
import xml.etree.ElementTree as ET
from dataclasses import dataclass
from datetime import date
from pathlib import Path

from .errors import DuplicateId, MalformedRecord

_WS_RUN = re.compile(r"\s+")

# Default element names for the XML ingestion path; override via config
# because gazette exports do not share a single schema.
DEFAULT_XML_ELEMENTS = {
    "date": "date",
    "title": "title",
    "body": "body",
    "organ": "organ",
}


@dataclass(frozen=True)
class NormalizedText:
    """A canonicalized text plus its whitespace-token count."""

    text: str
    token_count: int


@dataclass(frozen=True)
class RawDocument:
    """One gazette act as ingested; all text fields are stored normalized."""

    doc_id: str
    published_at: date
    title: str
    body: str
    organ: str = ""
    source_path: str = ""

    def to_dict(self) -> dict:
        return {
            "doc_id": self.doc_id,
            "date": self.published_at.isoformat(),
            "title": self.title,
            "body": self.body,
            "organ": self.organ,
            "source_path": self.source_path,
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "RawDocument":
        return cls(
            doc_id=payload["doc_id"],
            published_at=date.fromisoformat(payload["date"]),
            title=payload.get("title", ""),
            body=payload["body"],
            organ=payload.get("organ", ""),
            source_path=payload.get("source_path", ""),
        )


def normalize(text: str) -> NormalizedText:
    """Canonicalize a piece of text.

    Composes Unicode to NFC, replaces control characters (newline, tab,
    carriage return, and the rest of category Cc) with spaces, collapses
    whitespace runs to a single space, and trims the ends. Idempotent.
    """
    composed = unicodedata.normalize("NFC", text)
    spaced = "".join(
        " " if unicodedata.category(ch) == "Cc" else ch for ch in composed
    )
    collapsed = _WS_RUN.sub(" ", spaced).strip()
    count = len(collapsed.split()) if collapsed else 0
    return NormalizedText(text=collapsed, token_count=count)


def document_from_record(
    record: dict, *, source: str = "", line: int | None = None
) -> RawDocument:
    """Build a RawDocument from a parsed JSON record, normalizing all text.

    Requires doc_id, date, and a body that is non-empty after
    normalization; title and organ default to empty.
    """
    if not isinstance(record, dict):
        raise MalformedRecord("record is not an object", source=source, line=line)
    for key in ("doc_id", "date", "body"):
        if key not in record:
            raise MalformedRecord(f"missing key {key!r}", source=source, line=line)
    doc_id = str(record["doc_id"]).strip()
    if not doc_id:
        raise MalformedRecord("empty doc_id", source=source, line=line)
    try:
        published = date.fromisoformat(str(record["date"]))
    except ValueError:
        raise MalformedRecord(
            f"invalid date {record['date']!r}", source=source, line=line
        ) from None
    body = normalize(str(record["body"]))
    if not body.text:
        raise MalformedRecord("body empty after normalization", source=source, line=line)
    return RawDocument(
        doc_id=doc_id,
        published_at=published,
        title=normalize(str(record.get("title", ""))).text,
        body=body.text,
        organ=normalize(str(record.get("organ", ""))).text,
        source_path=source,
    )


def documents_from_jsonl(text: str, *, source: str = "<jsonl>") -> list[RawDocument]:
    """Parse one document per non-blank JSON line."""
    docs: list[RawDocument] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        if not raw.strip():
            continue
        try:
            record = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise MalformedRecord(
                f"invalid JSON: {exc.msg}", source=source, line=lineno
            ) from None
        docs.append(document_from_record(record, source=source, line=lineno))
    return docs


def load_jsonl(path: str | Path) -> list[RawDocument]:
    """Load documents from a JSONL file, in file order."""
    path = Path(path)
    return documents_from_jsonl(path.read_text(encoding="utf-8"), source=str(path))


def load_xml_dir(
    path: str | Path, *, elements: dict[str, str] | None = None
) -> list[RawDocument]:
    """Load one act per ``*.xml`` file in a directory, ordered by file path.

    The doc_id is the file stem. ``elements`` maps the logical fields
    (date, title, body, organ) to element names searched anywhere in the
    tree; date and body are required.
    """
    path = Path(path)
    names = dict(DEFAULT_XML_ELEMENTS)
    if elements:
        names.update(elements)
    docs: list[RawDocument] = []
    for file in sorted(path.glob("*.xml")):
        try:
            root = ET.parse(file).getroot()
        except ET.ParseError as exc:
            raise MalformedRecord(f"invalid XML: {exc}", source=str(file)) from None

        def text_of(key: str) -> str:
            el = root.find(f".//{names[key]}")
            if el is None:
                return ""
            return "".join(el.itertext())

        record = {
            "doc_id": file.stem,
            "date": text_of("date").strip(),
            "title": text_of("title"),
            "body": text_of("body"),
            "organ": text_of("organ"),
        }
        if not record["date"]:
            raise MalformedRecord(
                f"missing <{names['date']}> element", source=str(file)
            )
        if not record["body"].strip():
            raise MalformedRecord(
                f"missing <{names['body']}> element", source=str(file)
            )
        docs.append(document_from_record(record, source=str(file)))
    return docs


def load_corpus(
    path: str | Path,
    format: str = "jsonl",
    *,
    xml_elements: dict[str, str] | None = None,
) -> list[RawDocument]:
    """Load a corpus in the given format ("jsonl" or "xml-dir").

    Documents come back in file order; a doc_id appearing twice anywhere
    in the corpus raises DuplicateId. Input files are never modified.
    """
    if format == "jsonl":
        docs = load_jsonl(path)
    elif format == "xml-dir":
        docs = load_xml_dir(path, elements=xml_elements)
    else:
        raise ValueError(f"unknown corpus format {format!r}")
    seen: set[str] = set()
    for doc in docs:
        if doc.doc_id in seen:
            raise DuplicateId(doc.doc_id)
        seen.add(doc.doc_id)
    return docs
