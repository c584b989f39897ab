"""Tracker records: taxonomy, validation, CSV round trips, statistics."""

import math
from datetime import date

import pytest
from hypothesis import given, strategies as st

from gaztrack.dataset import (
    FineClass,
    GatRecord,
    GroupClass,
    compute_stats,
    export_gat,
    export_gat_text,
    group_of,
    load_gat,
    parse_fine_class,
    parse_group_class,
)
from gaztrack.errors import (
    BadDate,
    EmptyDataset,
    EmptyField,
    MissingField,
    UnknownClass,
)


def _record(i=0, fine=FineClass.REGULATION, action="Proíbe a pesca", **kw):
    args = {
        "record_id": f"r{i}",
        "date": date(2020, 1, 1),
        "theme": "Amazon Region",
        "action": action,
        "circumstance": "em toda a região",
        "fine_class": fine,
    }
    args.update(kw)
    return GatRecord.build(**args)


class TestTaxonomy:
    def test_exactly_twelve_fine_and_three_group_classes(self):
        assert len(FineClass) == 12
        assert len(GroupClass) == 3

    @pytest.mark.parametrize(
        "fine, group",
        [
            (FineClass.PLANNING, GroupClass.REGULATION),
            (FineClass.RETREAT, GroupClass.NEUTRAL),
            (FineClass.PRIVATIZATION, GroupClass.DEREGULATION),
        ],
    )
    def test_published_group_examples(self, fine, group):
        assert group_of(fine) is group

    def test_full_grouping(self):
        groups = {
            GroupClass.REGULATION: {
                FineClass.REGULATION, FineClass.PLANNING, FineClass.RESPONSE,
            },
            GroupClass.NEUTRAL: {
                FineClass.NEUTRAL, FineClass.RETREAT, FineClass.LEGISLATION,
            },
            GroupClass.DEREGULATION: {
                FineClass.PRIVATIZATION, FineClass.DEREGULATION,
                FineClass.FLEXIBILIZATION, FineClass.INSTITUTIONAL_REFORM,
                FineClass.LAW_CONSOLIDATION, FineClass.REVOCATION,
            },
        }
        for group, members in groups.items():
            assert {f for f in FineClass if group_of(f) is group} == members

    def test_total_and_surjective(self):
        images = {group_of(f) for f in FineClass}
        assert images == set(GroupClass)

    @pytest.mark.parametrize(
        "raw, fine",
        [
            ("Revocation", FineClass.REVOCATION),
            ("revocation", FineClass.REVOCATION),
            ("Institutional reform", FineClass.INSTITUTIONAL_REFORM),
            ("institutional_reform", FineClass.INSTITUTIONAL_REFORM),
            ("Law consolidation", FineClass.LAW_CONSOLIDATION),
            ("LAW-CONSOLIDATION", FineClass.LAW_CONSOLIDATION),
        ],
    )
    def test_label_spelling_variants(self, raw, fine):
        assert parse_fine_class(raw) is fine

    def test_unknown_fine_class(self):
        with pytest.raises(UnknownClass) as err:
            parse_fine_class("Banana", row=7)
        assert err.value.value == "Banana"
        assert err.value.row == 7

    def test_group_parse_rejects_fine_only_labels(self):
        assert parse_group_class("deregulation") is GroupClass.DEREGULATION
        with pytest.raises(UnknownClass):
            parse_group_class("Retreat")


class TestGatRecord:
    def test_build_normalizes_and_derives(self):
        r = GatRecord.build(
            record_id="r1",
            date=date(2020, 3, 4),
            theme="  Amazon\tRegion ",
            action="Revoga\natos",
            circumstance="em  caráter   urgente",
            fine_class=FineClass.REVOCATION,
        )
        assert r.theme == "Amazon Region"
        assert r.action == "Revoga atos"
        assert r.circumstance == "em caráter urgente"
        assert r.context == "Revoga atos em caráter urgente"
        assert r.group_class is GroupClass.DEREGULATION

    def test_empty_action_rejected(self):
        with pytest.raises(EmptyField) as err:
            _record(action=" \t ")
        assert err.value.field == "action"

    def test_empty_circumstance_rejected(self):
        with pytest.raises(EmptyField) as err:
            _record(circumstance="\n")
        assert err.value.field == "circumstance"

    def test_dict_round_trip(self):
        r = _record(fine=FineClass.FLEXIBILIZATION)
        assert GatRecord.from_dict(r.to_dict()) == r


class TestLoadGat:
    HEADER = "record_id,date,theme,action,circumstance,classification\n"

    def _load(self, tmp_path, rows, header=None):
        path = tmp_path / "gat.csv"
        path.write_text((header or self.HEADER) + rows, encoding="utf-8")
        return load_gat(path)

    def test_revocation_row_groups_as_deregulation(self, tmp_path):
        records = self._load(
            tmp_path, "a1,2020-01-02,Energia,Revoga portaria,sem substituto,Revocation\n"
        )
        assert records[0].group_class is GroupClass.DEREGULATION
        assert records[0].fine_class is FineClass.REVOCATION

    def test_unknown_classification(self, tmp_path):
        with pytest.raises(UnknownClass) as err:
            self._load(tmp_path, "a1,2020-01-02,T,Faz,Porque,Banana\n")
        assert err.value.value == "Banana"
        assert err.value.row == 0

    def test_empty_circumstance(self, tmp_path):
        with pytest.raises(MissingField) as err:
            self._load(
                tmp_path,
                "a1,2020-01-02,T,Faz,Porque,Neutral\na2,2020-01-03,T,Faz,,Neutral\n",
            )
        assert err.value.column == "circumstance"
        assert err.value.row == 1

    def test_missing_header_column(self, tmp_path):
        with pytest.raises(MissingField) as err:
            self._load(
                tmp_path,
                "a1,2020-01-02,T,Porque,Neutral\n",
                header="record_id,date,theme,circumstance,classification\n",
            )
        assert err.value.column == "action"

    def test_bad_date(self, tmp_path):
        with pytest.raises(BadDate) as err:
            self._load(tmp_path, "a1,02/01/2020,T,Faz,Porque,Neutral\n")
        assert err.value.row == 0

    def test_missing_date(self, tmp_path):
        with pytest.raises(MissingField) as err:
            self._load(tmp_path, "a1,,T,Faz,Porque,Neutral\n")
        assert err.value.column == "date"

    def test_record_id_synthesized_from_row_index(self, tmp_path):
        records = self._load(
            tmp_path,
            ",2020-01-02,T,Faz,Porque,Neutral\n,2020-01-03,T,Faz,Porque,Planning\n",
        )
        assert [r.record_id for r in records] == ["000000", "000001"]

    def test_record_id_column_optional(self, tmp_path):
        records = self._load(
            tmp_path,
            "2020-01-02,T,Faz,Porque,Neutral\n",
            header="date,theme,action,circumstance,classification\n",
        )
        assert records[0].record_id == "000000"


class TestExport:
    def test_three_records_round_trip(self, tmp_path):
        records = [
            _record(0, FineClass.REGULATION),
            _record(1, FineClass.NEUTRAL),
            _record(2, FineClass.REVOCATION),
        ]
        path = tmp_path / "out.csv"
        export_gat(records, path)
        assert load_gat(path) == records

    def test_empty_export_is_header_only(self):
        assert (
            export_gat_text([])
            == "record_id,date,theme,action,circumstance,classification\r\n"
        )

    def test_commas_and_quotes_round_trip(self, tmp_path):
        records = [
            _record(
                0,
                action='Suspende o "licenciamento", em parte',
                circumstance='área de risco, dita "crítica"',
            )
        ]
        path = tmp_path / "out.csv"
        export_gat(records, path)
        assert load_gat(path) == records

    @given(
        st.lists(
            st.tuples(
                st.integers(0, 10**6),
                st.dates(date(2019, 1, 1), date(2021, 12, 31)),
                st.sampled_from(list(FineClass)),
                st.text(alphabet='abc ,"\n\'é', min_size=1, max_size=30),
                st.text(alphabet='xyz ,"\n-á', min_size=1, max_size=30),
            ),
            max_size=8,
        )
    )
    def test_load_export_identity(self, tmp_path_factory, rows):
        records = []
        for i, (rid, when, fine, action, circumstance) in enumerate(rows):
            try:
                records.append(
                    GatRecord.build(
                        record_id=f"id{rid}-{i}",
                        date=when,
                        theme="T",
                        action=action,
                        circumstance=circumstance,
                        fine_class=fine,
                    )
                )
            except EmptyField:
                pass  # whitespace-only draws are invalid records by contract
        path = tmp_path_factory.mktemp("roundtrip") / "gat.csv"
        export_gat(records, path)
        assert load_gat(path) == records


class TestStats:
    def test_single_record(self):
        stats = compute_stats([_record(action="Proíbe a pesca artesanal")])
        assert stats.n_records == 1
        assert stats.action_words_mean == 4.0
        assert stats.action_words_std == 0.0
        assert stats.group_proportions[GroupClass.REGULATION] == 1.0
        assert stats.group_proportions[GroupClass.NEUTRAL] == 0.0

    def test_two_records_population_std(self):
        stats = compute_stats(
            [
                _record(0, action="uma pesca"),
                _record(1, action="uma pesca em seis palavras aqui"),
            ]
        )
        assert stats.action_words_mean == 4.0
        assert stats.action_words_std == 2.0

    def test_proportions_sum_to_one(self):
        records = [
            _record(i, fine)
            for i, fine in enumerate(
                [FineClass.REGULATION, FineClass.RETREAT, FineClass.REVOCATION,
                 FineClass.PLANNING, FineClass.NEUTRAL]
            )
        ]
        stats = compute_stats(records)
        assert math.isclose(sum(stats.group_proportions.values()), 1.0, abs_tol=1e-9)
        assert stats.group_proportions[GroupClass.REGULATION] == 0.4

    def test_date_range(self):
        records = [
            _record(0, date=date(2019, 5, 5)),
            _record(1, date=date(2019, 1, 1)),
            _record(2, date=date(2021, 7, 12)),
        ]
        stats = compute_stats(records)
        assert stats.date_min == date(2019, 1, 1)
        assert stats.date_max == date(2021, 7, 12)

    def test_empty_dataset(self):
        with pytest.raises(EmptyDataset):
            compute_stats([])

    def test_to_dict_serializable(self):
        payload = compute_stats([_record()]).to_dict()
        assert payload["n_records"] == 1
        assert payload["date_min"] == "2020-01-01"
        assert set(payload["group_proportions"]) == {
            "Regulation", "Neutral", "Deregulation",
        }
