"""Shared fixtures and the acceptance-summary terminal hook."""

from __future__ import annotations

import os
import random
from datetime import date
from pathlib import Path

import pytest

from gaztrack.dataset import FineClass, GatRecord
from gaztrack.ingest import RawDocument, load_jsonl
from gaztrack.rules import RuleSet, load_rules

FIXTURES = Path(__file__).parent / "fixtures"

# Vocabulary pools for synthetic corpora.  All plain ASCII so folding is a
# no-op and token identities stay obvious.
_FILLER = [
    "processo", "publica", "federal", "estado", "nacional", "sistema",
    "programa", "recurso", "gestao", "plano", "termo", "relatorio",
    "comissao", "prazo", "ambiental", "territorio", "projeto", "norma",
]


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def ruleset10() -> RuleSet:
    return load_rules(FIXTURES / "themes10.rules")


@pytest.fixture(scope="session")
def corpus20() -> list[RawDocument]:
    return load_jsonl(FIXTURES / "corpus20.jsonl")


def make_separable_records(per_class: int = 30) -> list[GatRecord]:
    """A corpus any sane classifier separates perfectly.

    Each group gets a marker token that appears only in that group's
    records (twice per record, so even tiny training splits carry it)
    plus a shared filler token, keeping the vocabulary overlapping but
    the classes disjoint on their markers.
    """
    markers = {
        FineClass.REGULATION: "proibe",
        FineClass.NEUTRAL: "informa",
        FineClass.PRIVATIZATION: "privatiza",
    }
    records = []
    for fine, marker in markers.items():
        for i in range(per_class):
            records.append(
                GatRecord.build(
                    record_id=f"{fine.value[:3].lower()}{i:03d}",
                    date=date(2020, 1, 1 + i % 28),
                    theme="Synthetic",
                    action=f"{marker} {marker} comum",
                    circumstance=f"registro {i}",
                    fine_class=fine,
                )
            )
    return records


def make_noise_records(n: int = 300, seed: int = 7) -> list[GatRecord]:
    """Balanced corpus whose text carries no class signal at all."""
    rng = random.Random(seed)
    fines = (FineClass.REGULATION, FineClass.NEUTRAL, FineClass.PRIVATIZATION)
    records = []
    for i in range(n):
        words = rng.choices(_FILLER, k=8)
        records.append(
            GatRecord.build(
                record_id=f"n{i:04d}",
                date=date(2020, 1 + i % 12, 1 + i % 28),
                theme="Synthetic",
                action=" ".join(words[:4]),
                circumstance=" ".join(words[4:]),
                fine_class=fines[i % 3],
            )
        )
    return records


@pytest.fixture()
def separable_records() -> list[GatRecord]:
    return make_separable_records()


def gat_csv_path() -> Path | None:
    """Locate the full annotated corpus if this checkout has one."""
    env = os.environ.get("GAZTRACK_GAT_CSV")
    if env:
        return Path(env)
    bundled = Path(__file__).parent.parent / "data" / "gat.csv"
    if bundled.exists():
        return bundled
    return None


# ---------------------------------------------------------------------------
# Acceptance summary: one pass/fail line per criterion.

ACCEPTANCE_CRITERIA = {
    "test_metrics_match_brute_force": "metrics agree with brute-force oracles on random matrices",
    "test_stratified_folds_are_balanced": "stratified folds balanced within one per class",
    "test_nb_matches_exact_posteriors": "Naive Bayes matches exact-arithmetic posteriors",
    "test_separable_corpus_scores_perfectly": "separable corpus scores 1.0 on every fold",
    "test_shuffled_labels_score_near_zero": "label-shuffled corpus centers MCC near zero",
    "test_full_corpus_reproduces_published_scores": "full corpus reproduces published CV scores",
    "test_rule_language_round_trip_and_matching": "rule language round-trips and matches like the oracle",
    "test_review_pipeline_round_trip": "ingest-review-export pipeline round-trips",
}


def _base_name(nodeid: str) -> str:
    name = nodeid.rsplit("::", 1)[-1]
    return name.split("[", 1)[0]


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    results: dict[str, str] = {}
    for status, rank in (("passed", 0), ("skipped", 1), ("failed", 2)):
        for report in terminalreporter.stats.get(status, []):
            nodeid = getattr(report, "nodeid", "")
            if "test_acceptance" not in nodeid:
                continue
            name = _base_name(nodeid)
            if name not in ACCEPTANCE_CRITERIA:
                continue
            current = results.get(name)
            if current is None or rank > {"PASS": 0, "SKIP": 1, "FAIL": 2}[current]:
                results[name] = {0: "PASS", 1: "SKIP", 2: "FAIL"}[rank]
    if not results:
        return
    writer = terminalreporter
    writer.section("acceptance criteria")
    for name, description in ACCEPTANCE_CRITERIA.items():
        status = results.get(name)
        if status is None:
            continue
        writer.write_line(f"{status:<4}  {description}")
