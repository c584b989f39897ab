"""Durable review store: journal/snapshot persistence and the review loop."""

import json
from datetime import date

import pytest

from gaztrack.dataset import FineClass, GatRecord, GroupClass
from gaztrack.errors import (
    DuplicateDocument,
    EmptyField,
    NotPending,
    StoreCorrupt,
    UnknownItem,
)
from gaztrack.features import Vocabulary, vectorize, tokenize
from gaztrack.ingest import RawDocument
from gaztrack.naive_bayes import train_nb
from gaztrack.rules import parse_rules
from gaztrack.store import JOURNAL_NAME, SNAPSHOT_NAME, ReviewStatus, Store

RULES = parse_rules(
    'theme "Amazon Region" { include: "amazônia" }\n'
    'theme "Energy" { include: "usina" }\n'
)


def _doc(doc_id, body, when=date(2020, 6, 1)):
    return RawDocument(doc_id=doc_id, published_at=when, title="T", body=body)


MATCHING = _doc("m1", "obras na amazônia legal")
OTHER = _doc("m2", "nova usina autorizada", when=date(2020, 5, 1))
UNMATCHED = _doc("u1", "assunto administrativo comum")


def _nb_model():
    # Vocabulary stores folded tokens, matching what tokenize() emits.
    vocab = Vocabulary.from_tokens(["amazonia", "usina"])
    examples = [
        (vectorize(tokenize("amazônia amazônia"), vocab), GroupClass.REGULATION),
        (vectorize(tokenize("usina usina"), vocab), GroupClass.DEREGULATION),
    ]
    return train_nb(examples, alpha=1.0, vocab_size=vocab.size), vocab


class TestEnqueue:
    def test_only_matching_documents_queued(self, tmp_path):
        with Store(tmp_path) as store:
            items = store.enqueue([MATCHING, UNMATCHED], RULES)
            assert [it.item_id for it in items] == ["m1"]
            assert items[0].matched_themes == ("Amazon Region",)
            assert items[0].status is ReviewStatus.PENDING
            assert items[0].robot_group_hint is None
            assert store.document_count() == 2

    def test_unmatched_documents_still_count_as_duplicates(self, tmp_path):
        with Store(tmp_path) as store:
            store.enqueue([UNMATCHED], RULES)
            with pytest.raises(DuplicateDocument) as err:
                store.enqueue([UNMATCHED], RULES)
            assert err.value.doc_id == "u1"

    def test_duplicate_batch_is_all_or_nothing(self, tmp_path):
        with Store(tmp_path) as store:
            store.enqueue([MATCHING], RULES)
            with pytest.raises(DuplicateDocument):
                store.enqueue([OTHER, MATCHING], RULES)
            assert store.document_count() == 1
            assert len(store.pending_items()) == 1

    def test_hint_from_supplied_model(self, tmp_path):
        with Store(tmp_path) as store:
            items = store.enqueue([MATCHING, OTHER], RULES, model=_nb_model())
            hints = {it.item_id: it.robot_group_hint for it in items}
            assert hints == {
                "m1": GroupClass.REGULATION,
                "m2": GroupClass.DEREGULATION,
            }

    def test_hint_from_stored_model(self, tmp_path):
        with Store(tmp_path) as store:
            store.set_model(*_nb_model())
            items = store.enqueue([MATCHING], RULES)
            assert items[0].robot_group_hint is GroupClass.REGULATION

    def test_rules_version_recorded(self, tmp_path):
        with Store(tmp_path) as store:
            store.enqueue([MATCHING], RULES)
            assert store.rules_version == RULES.version

    def test_queue_ordered_by_date_then_id(self, tmp_path):
        tied_a = _doc("b-doc", "amazônia", when=date(2020, 4, 1))
        tied_b = _doc("a-doc", "amazônia", when=date(2020, 4, 1))
        with Store(tmp_path) as store:
            store.enqueue([MATCHING, tied_a, OTHER, tied_b], RULES)
            assert [it.item_id for it in store.pending_items()] == [
                "a-doc", "b-doc", "m2", "m1",
            ]
            assert [it.item_id for it in store.pending_items(limit=2)] == [
                "a-doc", "b-doc",
            ]


class TestReview:
    def _seeded(self, tmp_path):
        store = Store(tmp_path)
        store.enqueue([MATCHING, OTHER], RULES)
        return store

    def test_submit_creates_record(self, tmp_path):
        with self._seeded(tmp_path) as store:
            record = store.submit_review(
                "m1", "Revoga a proteção", "para mineração", FineClass.REVOCATION
            )
            assert record.record_id == "m1"
            assert record.date == MATCHING.published_at
            assert record.theme == "Amazon Region"
            assert record.group_class is GroupClass.DEREGULATION
            item = store.get_item("m1")
            assert item.status is ReviewStatus.REVIEWED
            assert item.annotation.fine_class is FineClass.REVOCATION
            assert item.reviewed_at is not None
            assert store.all_records() == [record]

    def test_fine_class_accepted_as_string(self, tmp_path):
        with self._seeded(tmp_path) as store:
            record = store.submit_review("m1", "Cria comitê", "para estudo", "planning")
            assert record.fine_class is FineClass.PLANNING
            assert record.group_class is GroupClass.REGULATION

    def test_resubmit_rejected_without_double_insert(self, tmp_path):
        with self._seeded(tmp_path) as store:
            store.submit_review("m1", "Faz", "Porque", FineClass.NEUTRAL)
            with pytest.raises(NotPending) as err:
                store.submit_review("m1", "Refaz", "Porque", FineClass.NEUTRAL)
            assert err.value.status == "reviewed"
            assert len(store.all_records()) == 1

    def test_unknown_item(self, tmp_path):
        with self._seeded(tmp_path) as store:
            with pytest.raises(UnknownItem):
                store.submit_review("nope", "Faz", "Porque", FineClass.NEUTRAL)

    def test_empty_action_leaves_item_pending(self, tmp_path):
        with self._seeded(tmp_path) as store:
            with pytest.raises(EmptyField):
                store.submit_review("m1", "  ", "Porque", FineClass.NEUTRAL)
            assert store.get_item("m1").status is ReviewStatus.PENDING
            assert store.all_records() == []

    def test_discard(self, tmp_path):
        with self._seeded(tmp_path) as store:
            store.discard("m1")
            assert store.get_item("m1").status is ReviewStatus.DISCARDED
            assert [it.item_id for it in store.pending_items()] == ["m2"]
            with pytest.raises(NotPending):
                store.submit_review("m1", "Faz", "Porque", FineClass.NEUTRAL)
            with pytest.raises(NotPending):
                store.discard("m1")

    def test_reviewed_iff_annotated(self, tmp_path):
        with self._seeded(tmp_path) as store:
            store.submit_review("m1", "Faz", "Porque", FineClass.NEUTRAL)
            store.discard("m2")
            for item in store.items():
                assert (item.status is ReviewStatus.REVIEWED) == (
                    item.annotation is not None
                )

    def test_export_monotonicity(self, tmp_path):
        baseline = [
            GatRecord.build(
                record_id="seed1",
                date=date(2019, 2, 2),
                theme="Energy",
                action="Licencia usina",
                circumstance="no rio",
                fine_class=FineClass.REGULATION,
            )
        ]
        with self._seeded(tmp_path) as store:
            assert store.import_records(baseline) == 1
            store.submit_review("m1", "Faz", "Porque", FineClass.NEUTRAL)
            store.submit_review("m2", "Faz", "Porque", FineClass.RETREAT)
            records = store.all_records()
            assert len(records) == 3
            assert records[0] == baseline[0]


class TestPersistence:
    def test_reload_replays_journal(self, tmp_path):
        with Store(tmp_path) as store:
            store.enqueue([MATCHING, OTHER, UNMATCHED], RULES, model=_nb_model())
            store.submit_review("m1", "Faz algo", "por isso", FineClass.REVOCATION)
            store.discard("m2")
            store.set_model(*_nb_model())
            before = {
                "items": store.items(),
                "records": store.all_records(),
                "documents": store.document_count(),
                "rules_version": store.rules_version,
            }
        with Store(tmp_path) as reloaded:
            assert reloaded.items() == before["items"]
            assert reloaded.all_records() == before["records"]
            assert reloaded.document_count() == before["documents"]
            assert reloaded.rules_version == before["rules_version"]
            assert reloaded.model is not None

    def test_torn_final_journal_line_dropped(self, tmp_path):
        with Store(tmp_path) as store:
            store.enqueue([MATCHING], RULES)
            store.discard("m1")
        journal = tmp_path / JOURNAL_NAME
        with open(journal, "a", encoding="utf-8") as fh:
            fh.write('{"op": "review", "item_id": "m1", "annotat')
        with Store(tmp_path) as reloaded:
            # The torn write never happened; the discard survived.
            assert reloaded.get_item("m1").status is ReviewStatus.DISCARDED
            assert reloaded.all_records() == []

    def test_corrupt_middle_line_raises(self, tmp_path):
        with Store(tmp_path) as store:
            store.enqueue([MATCHING], RULES)
        journal = tmp_path / JOURNAL_NAME
        good = journal.read_text(encoding="utf-8")
        journal.write_text("garbage\n" + good, encoding="utf-8")
        with pytest.raises(StoreCorrupt, match="line 1"):
            Store(tmp_path)

    def test_unknown_journal_operation_raises(self, tmp_path):
        with Store(tmp_path):
            pass
        (tmp_path / JOURNAL_NAME).write_text(
            '{"op": "frobnicate"}\n', encoding="utf-8"
        )
        with pytest.raises(StoreCorrupt, match="frobnicate"):
            Store(tmp_path)

    def test_unparseable_snapshot_raises(self, tmp_path):
        with Store(tmp_path):
            pass
        (tmp_path / SNAPSHOT_NAME).write_text("{oops", encoding="utf-8")
        with pytest.raises(StoreCorrupt, match="snapshot"):
            Store(tmp_path)

    def test_foreign_snapshot_format_raises(self, tmp_path):
        (tmp_path / SNAPSHOT_NAME).write_text(
            json.dumps({"format": "other", "version": 1}), encoding="utf-8"
        )
        with pytest.raises(StoreCorrupt, match="format"):
            Store(tmp_path)

    def test_snapshot_compacts_journal(self, tmp_path):
        with Store(tmp_path) as store:
            store.enqueue([MATCHING, OTHER], RULES)
            store.submit_review("m1", "Faz", "Porque", FineClass.NEUTRAL)
            store.snapshot()
            assert (tmp_path / JOURNAL_NAME).read_text(encoding="utf-8") == ""
            # The long-lived journal handle must still work after truncation.
            store.discard("m2")
        journal_text = (tmp_path / JOURNAL_NAME).read_text(encoding="utf-8")
        assert json.loads(journal_text)["op"] == "discard"
        with Store(tmp_path) as reloaded:
            assert reloaded.get_item("m1").status is ReviewStatus.REVIEWED
            assert reloaded.get_item("m2").status is ReviewStatus.DISCARDED
            assert len(reloaded.all_records()) == 1

    def test_snapshot_of_empty_store(self, tmp_path):
        with Store(tmp_path) as store:
            store.snapshot()
        with Store(tmp_path) as reloaded:
            assert reloaded.items() == []
            assert reloaded.document_count() == 0

    def test_journal_written_before_memory(self, tmp_path):
        # Every committed operation must already be on disk when the call
        # returns, so a reader that never closes this store still sees it.
        with Store(tmp_path) as store:
            store.enqueue([MATCHING], RULES)
            lines = (
                (tmp_path / JOURNAL_NAME).read_text(encoding="utf-8").splitlines()
            )
            assert len(lines) == 1
            assert json.loads(lines[0])["op"] == "enqueue"
