"""Curated tracker records: taxonomy, validation, CSV load/export, stats.

Each record captures one reviewed government act: what was done (action),
under which justification (circumstance), filed under a theme, and
labelled with one of 12 fine-grained classes. The fine classes collapse
into 3 groups (Regulation / Neutral / Deregulation) used for modelling;
``context`` is the action and circumstance joined for feature extraction.
"""

from __future__ import annotations

import csv
import enum
import io
import statistics
from dataclasses import dataclass
from datetime import date as _date
from pathlib import Path

from .errors import BadDate, EmptyDataset, EmptyField, MissingField, UnknownClass
from .ingest import normalize


class FineClass(enum.Enum):
    REGULATION = "Regulation"
    DEREGULATION = "Deregulation"
    INSTITUTIONAL_REFORM = "InstitutionalReform"
    RESPONSE = "Response"
    FLEXIBILIZATION = "Flexibilization"
    NEUTRAL = "Neutral"
    RETREAT = "Retreat"
    LAW_CONSOLIDATION = "LawConsolidation"
    REVOCATION = "Revocation"
    PRIVATIZATION = "Privatization"
    LEGISLATION = "Legislation"
    PLANNING = "Planning"


class GroupClass(enum.Enum):
    REGULATION = "Regulation"
    NEUTRAL = "Neutral"
    DEREGULATION = "Deregulation"


_GROUP_OF: dict[FineClass, GroupClass] = {
    FineClass.REGULATION: GroupClass.REGULATION,
    FineClass.PLANNING: GroupClass.REGULATION,
    FineClass.RESPONSE: GroupClass.REGULATION,
    FineClass.NEUTRAL: GroupClass.NEUTRAL,
    FineClass.RETREAT: GroupClass.NEUTRAL,
    FineClass.LEGISLATION: GroupClass.NEUTRAL,
    FineClass.PRIVATIZATION: GroupClass.DEREGULATION,
    FineClass.DEREGULATION: GroupClass.DEREGULATION,
    FineClass.FLEXIBILIZATION: GroupClass.DEREGULATION,
    FineClass.INSTITUTIONAL_REFORM: GroupClass.DEREGULATION,
    FineClass.LAW_CONSOLIDATION: GroupClass.DEREGULATION,
    FineClass.REVOCATION: GroupClass.DEREGULATION,
}


def group_of(c: FineClass) -> GroupClass:
    """Map a fine class to its 3-way group. Total over FineClass."""
    return _GROUP_OF[c]


def _canon(value: str) -> str:
    return "".join(ch for ch in value.lower() if ch not in " -_")


_FINE_BY_CANON = {_canon(c.value): c for c in FineClass}
_GROUP_BY_CANON = {_canon(c.value): c for c in GroupClass}


def parse_fine_class(value: str, row: int | None = None) -> FineClass:
    """Accepts label spelling variants: case-insensitive, spaces/hyphens/
    underscores ignored ("Institutional reform" -> InstitutionalReform)."""
    try:
        return _FINE_BY_CANON[_canon(value)]
    except KeyError:
        raise UnknownClass(value, row) from None


def parse_group_class(value: str, row: int | None = None) -> GroupClass:
    try:
        return _GROUP_BY_CANON[_canon(value)]
    except KeyError:
        raise UnknownClass(value, row) from None


@dataclass(frozen=True)
class GatRecord:
    record_id: str
    date: _date
    theme: str
    action: str
    circumstance: str
    fine_class: FineClass
    context: str
    group_class: GroupClass

    @classmethod
    def build(
        cls,
        *,
        record_id: str,
        date: _date,
        theme: str,
        action: str,
        circumstance: str,
        fine_class: FineClass,
    ) -> "GatRecord":
        """Normalize the text fields and derive context and group_class.

        Raises EmptyField if action or circumstance is blank once
        normalized; the tracker has no missing data by construction.
        """
        action_n = normalize(action).text
        circumstance_n = normalize(circumstance).text
        if not action_n:
            raise EmptyField("action")
        if not circumstance_n:
            raise EmptyField("circumstance")
        return cls(
            record_id=record_id,
            date=date,
            theme=normalize(theme).text,
            action=action_n,
            circumstance=circumstance_n,
            fine_class=fine_class,
            context=action_n + " " + circumstance_n,
            group_class=group_of(fine_class),
        )

    def to_dict(self) -> dict:
        return {
            "record_id": self.record_id,
            "date": self.date.isoformat(),
            "theme": self.theme,
            "action": self.action,
            "circumstance": self.circumstance,
            "classification": self.fine_class.value,
            "context": self.context,
            "group_class": self.group_class.value,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "GatRecord":
        return cls.build(
            record_id=data["record_id"],
            date=_date.fromisoformat(data["date"]),
            theme=data["theme"],
            action=data["action"],
            circumstance=data["circumstance"],
            fine_class=parse_fine_class(data["classification"]),
        )


@dataclass(frozen=True)
class DatasetStats:
    n_records: int
    action_words_mean: float
    action_words_std: float
    circumstance_words_mean: float
    circumstance_words_std: float
    group_proportions: dict[GroupClass, float]
    date_min: _date
    date_max: _date

    def to_dict(self) -> dict:
        return {
            "n_records": self.n_records,
            "action_words_mean": self.action_words_mean,
            "action_words_std": self.action_words_std,
            "circumstance_words_mean": self.circumstance_words_mean,
            "circumstance_words_std": self.circumstance_words_std,
            "group_proportions": {
                g.value: p for g, p in self.group_proportions.items()
            },
            "date_min": self.date_min.isoformat(),
            "date_max": self.date_max.isoformat(),
        }


_CSV_COLUMNS = ("record_id", "date", "theme", "action", "circumstance", "classification")
_REQUIRED_COLUMNS = _CSV_COLUMNS[1:]  # record_id may be synthesized


def load_gat(path: str | Path) -> list[GatRecord]:
    """Read tracker records from CSV.

    Expects header columns date, theme, action, circumstance,
    classification; record_id is optional and synthesized as the
    zero-padded 0-based row index when absent or blank. Row numbers in
    errors are 0-based data rows, matching synthesized ids.
    """
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        for column in _REQUIRED_COLUMNS:
            if column not in header:
                raise MissingField(column)
        records: list[GatRecord] = []
        for i, row in enumerate(reader):
            raw_date = (row.get("date") or "").strip()
            if not raw_date:
                raise MissingField("date", i)
            try:
                when = _date.fromisoformat(raw_date)
            except ValueError:
                raise BadDate(raw_date, i) from None
            for column in ("theme", "action", "circumstance", "classification"):
                if not normalize(row.get(column) or "").text:
                    raise MissingField(column, i)
            record_id = (row.get("record_id") or "").strip() or f"{i:06d}"
            records.append(
                GatRecord.build(
                    record_id=record_id,
                    date=when,
                    theme=row["theme"],
                    action=row["action"],
                    circumstance=row["circumstance"],
                    fine_class=parse_fine_class(row["classification"], row=i),
                )
            )
    return records


def export_gat_text(records: list[GatRecord]) -> str:
    """Records as CSV text, same schema load_gat reads."""
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(_CSV_COLUMNS)
    for r in records:
        writer.writerow(
            [
                r.record_id,
                r.date.isoformat(),
                r.theme,
                r.action,
                r.circumstance,
                r.fine_class.value,
            ]
        )
    return buf.getvalue()


def export_gat(records: list[GatRecord], path: str | Path) -> None:
    """Write records as CSV with the same schema load_gat reads.

    load_gat of the written file reproduces the records field-for-field.
    """
    with open(path, "w", newline="", encoding="utf-8") as fh:
        fh.write(export_gat_text(records))


def compute_stats(records: list[GatRecord]) -> DatasetStats:
    """Corpus summary: word-count means/population stds for action and
    circumstance, group shares, and date range."""
    if not records:
        raise EmptyDataset()
    action_words = [len(r.action.split()) for r in records]
    circumstance_words = [len(r.circumstance.split()) for r in records]
    n = len(records)
    counts = {g: 0 for g in GroupClass}
    for r in records:
        counts[r.group_class] += 1
    return DatasetStats(
        n_records=n,
        action_words_mean=statistics.fmean(action_words),
        action_words_std=statistics.pstdev(action_words),
        circumstance_words_mean=statistics.fmean(circumstance_words),
        circumstance_words_std=statistics.pstdev(circumstance_words),
        group_proportions={g: counts[g] / n for g in GroupClass},
        date_min=min(r.date for r in records),
        date_max=max(r.date for r in records),
    )
