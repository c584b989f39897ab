"""Theme rules and the review queue.

Parses a small rule set, shows how phrases match gazette text (case- and
accent-insensitively, with exclusions), then ingests a JSONL batch into
a throwaway store and prints the resulting review queue.
"""

import json
import tempfile
from datetime import date
from pathlib import Path

from gaztrack.ingest import RawDocument, load_jsonl
from gaztrack.rules import format_rules, match_spans, parse_rules, pre_classify
from gaztrack.store import Store

RULES = """
theme "Amazon Region" {
  include: "amazônia" OR "floresta amazônica"
}

theme "Energy" {
  include: ("usina" OR "hidrelétrica") AND "licença ambiental"
  exclude: "edital de leilão"
}
"""

DOCS = [
    RawDocument(
        doc_id="act-101",
        published_at=date(2020, 6, 2),
        title="Portaria nº 12",
        body="Autoriza pesquisa mineral na AMAZÔNIA legal.",
    ),
    RawDocument(
        doc_id="act-102",
        published_at=date(2020, 6, 1),
        title="Despacho nº 77",
        body="Concede licença ambiental à usina de Belo Monte.",
    ),
    RawDocument(
        doc_id="act-103",
        published_at=date(2020, 6, 3),
        title="Despacho nº 78",
        body="Publica edital de leilão da usina; licença ambiental pendente.",
    ),
    RawDocument(
        doc_id="act-104",
        published_at=date(2020, 6, 4),
        title="Aviso nº 3",
        body="Expediente administrativo interno, sem tema ambiental.",
    ),
]


def main() -> None:
    rules = parse_rules(RULES)
    print(f"parsed {len(rules.rules)} themes, version {rules.version}")
    print("pretty-printed canonical form:")
    print(format_rules(rules))

    for doc in DOCS:
        themes = pre_classify(rules, doc)
        verdict = ", ".join(themes) if themes else "(not routed)"
        print(f"{doc.doc_id}  {verdict}")
        for rule in rules.rules:
            if rule.theme_name in themes:
                for start, end in match_spans(rule, doc.body):
                    print(f"  {rule.theme_name}: ...{doc.body[start:end]}...")

    with tempfile.TemporaryDirectory() as tmp:
        batch = Path(tmp) / "batch.jsonl"
        batch.write_text(
            "\n".join(
                json.dumps(
                    {
                        "doc_id": d.doc_id,
                        "date": d.published_at.isoformat(),
                        "title": d.title,
                        "body": d.body,
                    },
                    ensure_ascii=False,
                )
                for d in DOCS
            ),
            encoding="utf-8",
        )
        docs = load_jsonl(batch)
        with Store(Path(tmp) / "store") as store:
            items = store.enqueue(docs, rules)
            print(f"\nenqueued {len(items)} of {len(docs)} documents for review:")
            for item in store.items():
                print(
                    f"  {item.doc.published_at}  {item.item_id:<8}"
                    f" themes={list(item.matched_themes)}"
                )


if __name__ == "__main__":
    main()
