"""Training, cross-validation, and prediction scoring.

Builds a small annotated corpus in memory, writes it through the CSV
round trip, runs stratified 10-fold cross-validation, then trains on the
full file and scores the resulting prediction file — the same flow as
``gaztrack evaluate`` / ``train`` / ``classify`` / ``evaluate-preds``.
"""

import random
import tempfile
from datetime import date, timedelta
from pathlib import Path

from gaztrack.cli import main as gaztrack
from gaztrack.dataset import FineClass, GatRecord, export_gat
from gaztrack.evaluation import nb_trainer, run_cv

# Three loose topical registers, one per direction of regulation. The
# vocabulary overlaps on purpose; only the tendencies differ.
PHRASES = {
    FineClass.REGULATION: [
        "proíbe a supressão de vegetação nativa",
        "estabelece limites de emissão para a atividade",
        "cria unidade de conservação na região",
        "determina a recuperação da área degradada",
    ],
    FineClass.NEUTRAL: [
        "designa os membros do conselho gestor",
        "divulga o calendário de reuniões do comitê",
        "publica o regimento interno do órgão",
        "informa o resultado do processo seletivo",
    ],
    FineClass.FLEXIBILIZATION: [
        "dispensa o licenciamento para a atividade",
        "amplia o prazo de validade da licença",
        "simplifica o procedimento de autorização",
        "reduz a abrangência da proteção anterior",
    ],
}


def synthetic_corpus(per_class: int = 40, seed: int = 5) -> list[GatRecord]:
    rng = random.Random(seed)
    all_phrases = [p for phrases in PHRASES.values() for p in phrases]
    records = []
    for fine, phrases in PHRASES.items():
        for i in range(per_class):
            # The circumstance borrows from other registers now and then,
            # so the classes overlap like real annotations do.
            circumstance = " ".join(
                rng.choice(all_phrases if rng.random() < 0.4 else phrases)
                for _ in range(2)
            )
            records.append(
                GatRecord.build(
                    record_id=f"{fine.value.lower()}-{i:03d}",
                    date=date(2020, 1, 1) + timedelta(days=rng.randrange(500)),
                    theme="Demo",
                    action=rng.choice(phrases),
                    circumstance=circumstance,
                    fine_class=fine,
                )
            )
    return records


def main() -> None:
    records = synthetic_corpus()
    report = run_cv(records, nb_trainer(alpha=1.0, min_df=2), k=10, seed=42)
    print("10-fold stratified cross-validation:")
    print(report.format_table())
    print()

    with tempfile.TemporaryDirectory() as tmp:
        gat = str(Path(tmp) / "gat.csv")
        model = str(Path(tmp) / "model.json")
        preds = str(Path(tmp) / "preds.csv")
        export_gat(records, gat)
        print("$ gaztrack stats gat.csv")
        gaztrack(["stats", gat])
        print("\n$ gaztrack train gat.csv --out model.json")
        gaztrack(["train", gat, "--out", model])
        print("\n$ gaztrack classify gat.csv --model model.json --out preds.csv")
        gaztrack(["classify", gat, "--model", model, "--out", preds])
        print("\n$ gaztrack evaluate-preds gat.csv preds.csv")
        gaztrack(["evaluate-preds", gat, preds])


if __name__ == "__main__":
    main()
