"""The full review loop over HTTP.

Starts the service on a local port, then drives it with plain
``urllib``: post a document batch, review it, train the classifier,
watch the next batch arrive pre-hinted, disagree with one hint, pull the
rule suggestions that disagreement produces, and export the records.
"""

import json
import socket
import tempfile
import threading
import time
import urllib.request

import uvicorn

from gaztrack.config import AppConfig
from gaztrack.service import create_app

RULES_SOURCE = """
theme "Protected Areas" {
  include: "unidade de conservação" OR "reserva extrativista" OR "parque nacional"
}
"""

BATCH_ONE = [
    {
        "doc_id": "act-201",
        "date": "2021-02-03",
        "title": "Decreto nº 901",
        "body": "Reduz os limites do parque nacional e autoriza o garimpo na área.",
    },
    {
        "doc_id": "act-202",
        "date": "2021-02-04",
        "title": "Portaria nº 55",
        "body": "Divulga o plano de manejo da reserva extrativista do Rio Cajari.",
    },
]

# Posted after training, so these arrive with a robot hint attached.
BATCH_TWO = [
    {
        "doc_id": "act-203",
        "date": "2021-03-01",
        "title": "Portaria nº 70",
        "body": "Divulga o plano de manejo que autoriza garimpo na reserva extrativista.",
    },
    {
        "doc_id": "act-204",
        "date": "2021-03-02",
        "title": "Portaria nº 71",
        "body": "Divulga o calendário de reuniões e o plano de rotina da reserva extrativista.",
    },
]

REVIEWS = {
    "act-201": {
        "action": "Reduz os limites do parque nacional",
        "circumstance": "para autorizar garimpo na área protegida",
        "classification": "Flexibilization",
    },
    "act-202": {
        "action": "Divulga o plano de manejo da reserva",
        "circumstance": "ato de rotina administrativa",
        "classification": "Neutral",
    },
    # The robot will hint Neutral for both of these; the expert agrees on
    # one and overrules the other, giving the suggester its contrast.
    "act-203": {
        "action": "Autoriza garimpo dentro da reserva",
        "circumstance": "sob a forma de plano de manejo",
        "classification": "Flexibilization",
    },
    "act-204": {
        "action": "Divulga calendário de reuniões",
        "circumstance": "ato de rotina administrativa",
        "classification": "Neutral",
    },
}


def api(base: str, path: str, payload=None, method: str | None = None):
    data = None
    headers = {}
    if payload is not None:
        data = json.dumps(payload).encode("utf-8")
        headers["Content-Type"] = "application/json"
    request = urllib.request.Request(
        base + path, data=data, headers=headers, method=method
    )
    with urllib.request.urlopen(request) as response:
        return json.loads(response.read())


def post_jsonl(base: str, docs: list[dict]) -> dict:
    body = "\n".join(json.dumps(d, ensure_ascii=False) for d in docs)
    request = urllib.request.Request(
        base + "/api/documents",
        data=body.encode("utf-8"),
        headers={"Content-Type": "application/x-ndjson"},
    )
    with urllib.request.urlopen(request) as response:
        return json.loads(response.read())


def review_pending(base: str) -> None:
    for item in api(base, "/api/queue"):
        print(
            f"  pending {item['item_id']}  themes={item['matched_themes']}"
            f"  hint={item['robot_group_hint']}"
        )
        record = api(
            base, f"/api/reviews/{item['item_id']}",
            REVIEWS[item["item_id"]], method="POST",
        )
        print(
            f"    reviewed as {record['classification']}"
            f" -> group {record['group_class']}"
        )


def main() -> None:
    with socket.socket() as probe:
        probe.bind(("127.0.0.1", 0))
        port = probe.getsockname()[1]
    base = f"http://127.0.0.1:{port}"

    with tempfile.TemporaryDirectory() as tmp:
        rules_path = f"{tmp}/themes.rules"
        with open(rules_path, "w", encoding="utf-8") as handle:
            handle.write(RULES_SOURCE)
        app = create_app(
            AppConfig(rules_path=rules_path, data_dir=f"{tmp}/store", min_df=1)
        )
        server = uvicorn.Server(
            uvicorn.Config(app, host="127.0.0.1", port=port, log_level="warning")
        )
        thread = threading.Thread(target=server.run, daemon=True)
        thread.start()
        while not server.started:
            time.sleep(0.05)

        try:
            print(f"service up at {base}")
            print("first batch:", post_jsonl(base, BATCH_ONE))
            review_pending(base)

            print("training:", api(base, "/api/train", {}, method="POST"))
            print("second batch:", post_jsonl(base, BATCH_TWO))
            review_pending(base)

            print("rule suggestions mined from reviewer disagreement:")
            for s in api(base, "/api/suggestions"):
                print(
                    f"  {s['theme_name']}: {s['direction']}"
                    f" \"{s['candidate_token']}\""
                    f"  (evidence {s['evidence_count']}, score {s['score']:.3f})"
                )

            export = urllib.request.urlopen(base + "/api/export/gat.csv").read()
            print("exported CSV:")
            print(export.decode("utf-8"))
        finally:
            server.should_exit = True
            thread.join(timeout=5)


if __name__ == "__main__":
    main()
