"""Multinomial Naive Bayes over context count vectors, in log space.

Hand-rolled on purpose: the classifier is the measured subject of this
package's evaluation harness, so its arithmetic must be inspectable and
deterministic down to the bit. Also hosts the prediction-file adapter
that lets externally produced per-record predictions be scored by the
same evaluation pipeline.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from pathlib import Path

from .dataset import GroupClass, parse_group_class
from .errors import DuplicateId, MalformedRecord, MissingField, NoExamples, ZeroAlpha
from .features import CountVector, Vocabulary

MODEL_FORMAT = "gaztrack-nb"
MODEL_VERSION = 1


@dataclass(frozen=True)
class NbModel:
    classes: tuple[GroupClass, ...]
    log_prior: tuple[float, ...]
    log_likelihood: tuple[tuple[float, ...], ...]
    alpha: float
    vocab_size: int


def train_nb(
    examples: list[tuple[CountVector, GroupClass]],
    alpha: float = 1.0,
    *,
    vocab_size: int,
) -> NbModel:
    """Fit priors and Laplace-smoothed token likelihoods.

    log_prior[c] = ln(n_c / n); log_likelihood[c][t] =
    ln((count(t, c) + alpha) / (total(c) + alpha * V)). Classes are kept
    in canonical order (Regulation, Neutral, Deregulation) restricted to
    those observed.
    """
    if not examples:
        raise NoExamples()
    if alpha <= 0:
        raise ZeroAlpha(alpha)
    classes = tuple(
        g for g in GroupClass if any(label is g for _, label in examples)
    )
    index = {g: i for i, g in enumerate(classes)}
    n_docs = [0] * len(classes)
    token_counts = [[0] * vocab_size for _ in classes]
    totals = [0] * len(classes)
    for vector, label in examples:
        ci = index[label]
        n_docs[ci] += 1
        row = token_counts[ci]
        for t, cnt in vector.counts.items():
            row[t] += cnt
        totals[ci] += vector.total
    n = len(examples)
    log_prior = tuple(math.log(n_c / n) for n_c in n_docs)
    log_likelihood = tuple(
        tuple(
            math.log((token_counts[ci][t] + alpha) / (totals[ci] + alpha * vocab_size))
            for t in range(vocab_size)
        )
        for ci in range(len(classes))
    )
    return NbModel(
        classes=classes,
        log_prior=log_prior,
        log_likelihood=log_likelihood,
        alpha=alpha,
        vocab_size=vocab_size,
    )


def _select(model: NbModel, scores: list[float]) -> int:
    """Argmax with deterministic ties: higher prior wins, then the
    earlier class in model order."""
    best = 0
    for i in range(1, len(scores)):
        if scores[i] > scores[best] or (
            scores[i] == scores[best] and model.log_prior[i] > model.log_prior[best]
        ):
            best = i
    return best


def predict_nb(
    model: NbModel, x: CountVector
) -> tuple[GroupClass, dict[GroupClass, float]]:
    """Score every class and return the winner with all log scores."""
    scores = []
    for ci in range(len(model.classes)):
        row = model.log_likelihood[ci]
        s = model.log_prior[ci]
        for t, cnt in x.counts.items():
            s += cnt * row[t]
        scores.append(s)
    winner = model.classes[_select(model, scores)]
    return winner, {c: scores[i] for i, c in enumerate(model.classes)}


# ---------------------------------------------------------------------------
# Persistence

def model_to_payload(model: NbModel, vocab: Vocabulary) -> dict:
    return {
        "format": MODEL_FORMAT,
        "version": MODEL_VERSION,
        "alpha": model.alpha,
        "classes": [c.value for c in model.classes],
        "log_prior": list(model.log_prior),
        "log_likelihood": [list(row) for row in model.log_likelihood],
        "vocab": list(vocab.tokens),
        "min_df": vocab.min_df,
    }


def model_from_payload(payload: dict, *, source: str = "") -> tuple[NbModel, Vocabulary]:
    if not isinstance(payload, dict) or payload.get("format") != MODEL_FORMAT:
        raise MalformedRecord("not a model payload", source=source)
    if payload.get("version") != MODEL_VERSION:
        raise MalformedRecord(
            f"unsupported model version {payload.get('version')!r}", source=source
        )
    try:
        vocab = Vocabulary.from_tokens(
            payload["vocab"], min_df=int(payload.get("min_df", 1))
        )
        model = NbModel(
            classes=tuple(parse_group_class(c) for c in payload["classes"]),
            log_prior=tuple(float(v) for v in payload["log_prior"]),
            log_likelihood=tuple(
                tuple(float(v) for v in row) for row in payload["log_likelihood"]
            ),
            alpha=float(payload["alpha"]),
            vocab_size=len(payload["vocab"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedRecord(f"bad model payload: {exc}", source=source) from exc
    return model, vocab


def save_model(model: NbModel, vocab: Vocabulary, path: str | Path) -> None:
    payload = model_to_payload(model, vocab)
    Path(path).write_text(json.dumps(payload), encoding="utf-8")


def load_model(path: str | Path) -> tuple[NbModel, Vocabulary]:
    source = str(path)
    try:
        payload = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, ValueError) as exc:
        raise MalformedRecord(f"unreadable model file: {exc}", source=source) from exc
    return model_from_payload(payload, source=source)


# ---------------------------------------------------------------------------
# External prediction files

@dataclass(frozen=True)
class PredictionRow:
    record_id: str
    predicted: GroupClass
    scores: dict[GroupClass, float] | None = None


@dataclass(frozen=True)
class PredictionFile:
    rows: tuple[PredictionRow, ...]

    def by_id(self) -> dict[str, PredictionRow]:
        return {r.record_id: r for r in self.rows}


_SCORE_COLUMNS = {g: f"score_{g.value}" for g in GroupClass}


def read_predictions(path: str | Path) -> PredictionFile:
    """Read per-record predictions produced by any external model.

    CSV header: record_id,predicted plus optional score_Regulation,
    score_Neutral, score_Deregulation columns.
    """
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        for column in ("record_id", "predicted"):
            if column not in header:
                raise MissingField(column)
        has_scores = all(c in header for c in _SCORE_COLUMNS.values())
        rows: list[PredictionRow] = []
        seen: set[str] = set()
        for i, row in enumerate(reader):
            record_id = (row.get("record_id") or "").strip()
            if not record_id:
                raise MissingField("record_id", i)
            if record_id in seen:
                raise DuplicateId(record_id)
            seen.add(record_id)
            predicted = parse_group_class((row.get("predicted") or "").strip(), row=i)
            scores = None
            if has_scores:
                scores = {
                    g: float(row[col]) for g, col in _SCORE_COLUMNS.items()
                }
            rows.append(PredictionRow(record_id, predicted, scores))
    return PredictionFile(rows=tuple(rows))


def predictions_csv_text(preds: PredictionFile) -> str:
    with_scores = all(r.scores is not None for r in preds.rows) and bool(preds.rows)
    buf = io.StringIO()
    writer = csv.writer(buf)
    header = ["record_id", "predicted"]
    if with_scores:
        header += list(_SCORE_COLUMNS.values())
    writer.writerow(header)
    for r in preds.rows:
        row: list = [r.record_id, r.predicted.value]
        if with_scores:
            assert r.scores is not None
            row += [r.scores[g] for g in GroupClass]
        writer.writerow(row)
    return buf.getvalue()


def write_predictions(preds: PredictionFile, path: str | Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        fh.write(predictions_csv_text(preds))
