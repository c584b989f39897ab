"""Stratified k-fold evaluation with MCC, accuracy, and weighted F1.

Metrics are computed from integer confusion-matrix sums with a single
final division each, so degenerate and perfectly-separable cases come
out exact (1.0 means 1.0). The multiclass MCC is the R_K statistic; on
two classes it reduces to the familiar binary formula.
"""

from __future__ import annotations

import math
import random
import statistics
from dataclasses import dataclass
from typing import Callable, Hashable, Sequence

from .dataset import GatRecord, GroupClass
from .errors import BadK, DuplicateId, EmptyMatrix, MissingPrediction, UnknownClass
from .features import build_vocab, tokenize, vectorize
from .naive_bayes import PredictionFile, predict_nb, train_nb

Label = Hashable
Predictor = Callable[[GatRecord], GroupClass]
Trainer = Callable[[list[GatRecord]], Predictor]


@dataclass(frozen=True)
class FoldAssignment:
    fold_of: dict[str, int]
    k: int
    seed: int

    def members(self, fold: int) -> list[str]:
        return [rid for rid, f in self.fold_of.items() if f == fold]


def stratified_folds(
    labels: Sequence[tuple[str, GroupClass]], k: int, seed: int
) -> FoldAssignment:
    """Assign records to k folds, balancing every class to within one.

    Within each class (classes taken in first-appearance order) the ids
    are shuffled by a single seeded generator and dealt round-robin,
    starting at fold (class_index mod k) so small classes do not all
    land on fold 0.
    """
    n = len(labels)
    if k < 2 or k > n:
        raise BadK(k, n)
    by_class: dict[GroupClass, list[str]] = {}
    seen: set[str] = set()
    for record_id, label in labels:
        if record_id in seen:
            raise DuplicateId(record_id)
        seen.add(record_id)
        by_class.setdefault(label, []).append(record_id)
    rng = random.Random(seed)
    fold_of: dict[str, int] = {}
    for class_index, ids in enumerate(by_class.values()):
        ids = list(ids)
        rng.shuffle(ids)
        start = class_index % k
        for j, record_id in enumerate(ids):
            fold_of[record_id] = (start + j) % k
    return FoldAssignment(fold_of=fold_of, k=k, seed=seed)


# ---------------------------------------------------------------------------
# Confusion matrix and metrics

@dataclass(frozen=True)
class ConfusionMatrix:
    """Square integer count grid; rows are true labels, columns predicted."""

    classes: tuple[Label, ...]
    counts: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        k = len(self.classes)
        if len(self.counts) != k or any(len(row) != k for row in self.counts):
            raise ValueError("confusion matrix must be square over its classes")
        if any(v < 0 for row in self.counts for v in row):
            raise ValueError("confusion matrix entries must be non-negative")

    @classmethod
    def from_pairs(
        cls,
        pairs: Sequence[tuple[Label, Label]],
        classes: Sequence[Label],
    ) -> "ConfusionMatrix":
        index = {c: i for i, c in enumerate(classes)}
        grid = [[0] * len(classes) for _ in classes]
        for true, predicted in pairs:
            try:
                grid[index[true]][index[predicted]] += 1
            except KeyError as exc:
                raise UnknownClass(str(exc.args[0])) from None
        return cls(classes=tuple(classes), counts=tuple(tuple(r) for r in grid))

    @property
    def total(self) -> int:
        return sum(sum(row) for row in self.counts)

    @property
    def trace(self) -> int:
        return sum(self.counts[i][i] for i in range(len(self.classes)))

    def row_sums(self) -> list[int]:
        return [sum(row) for row in self.counts]

    def col_sums(self) -> list[int]:
        return [sum(row[j] for row in self.counts) for j in range(len(self.classes))]

    def to_dict(self) -> dict:
        return {
            "classes": [
                c.value if isinstance(c, GroupClass) else str(c) for c in self.classes
            ],
            "counts": [list(row) for row in self.counts],
        }


def accuracy(cm: ConfusionMatrix) -> float:
    total = cm.total
    if total == 0:
        raise EmptyMatrix()
    return cm.trace / total


def weighted_f1(cm: ConfusionMatrix) -> float:
    """Support-weighted mean of per-class F1.

    Per class, F1 = 2PR/(P+R) simplifies to 2d/(row+col) with d the
    diagonal entry, which keeps the arithmetic to one division. Classes
    with no support and no predictions are skipped; d = 0 gives F1 = 0.
    """
    total = cm.total
    if total == 0:
        raise EmptyMatrix()
    rows = cm.row_sums()
    cols = cm.col_sums()
    acc = 0.0
    for i in range(len(cm.classes)):
        denom = rows[i] + cols[i]
        if denom == 0:
            continue
        acc += rows[i] * (2 * cm.counts[i][i] / denom)
    return acc / total


def mcc(cm: ConfusionMatrix) -> float:
    """Multiclass Matthews correlation (R_K); 0 by convention when a
    degenerate margin empties either variance factor."""
    s = cm.total
    if s == 0:
        raise EmptyMatrix()
    c = cm.trace
    rows = cm.row_sums()
    cols = cm.col_sums()
    cov = c * s - sum(p * t for p, t in zip(cols, rows))
    var_pred = s * s - sum(p * p for p in cols)
    var_true = s * s - sum(t * t for t in rows)
    if var_pred == 0 or var_true == 0:
        return 0.0
    return cov / math.sqrt(var_pred * var_true)


METRICS = {"mcc": mcc, "acc": accuracy, "weighted_f1": weighted_f1}


def all_metrics(cm: ConfusionMatrix) -> dict[str, float]:
    return {name: fn(cm) for name, fn in METRICS.items()}


# ---------------------------------------------------------------------------
# Cross-validation

@dataclass(frozen=True)
class FoldMetrics:
    fold: int
    mcc: float
    acc: float
    weighted_f1: float


@dataclass(frozen=True)
class CvReport:
    model: str
    k: int
    seed: int
    folds: tuple[FoldMetrics, ...]
    mean: dict[str, float]
    std: dict[str, float]

    def to_json_dict(self) -> dict:
        return {
            "model": self.model,
            "k": self.k,
            "seed": self.seed,
            "folds": [
                {
                    "fold": f.fold,
                    "mcc": f.mcc,
                    "acc": f.acc,
                    "weighted_f1": f.weighted_f1,
                }
                for f in self.folds
            ],
            "mean": dict(self.mean),
            "std": dict(self.std),
        }

    def format_table(self) -> str:
        header = f"{'Model':<24}{'MCC':>16}{'Acc':>16}{'F1':>16}"
        cells = [
            f"{self.mean[m]:.3f} ± {self.std[m]:.3f}"
            for m in ("mcc", "acc", "weighted_f1")
        ]
        row = f"{self.model:<24}" + "".join(f"{c:>16}" for c in cells)
        return header + "\n" + row


def nb_trainer(alpha: float = 1.0, min_df: int = 2) -> Trainer:
    """Factory for the bundled classifier: per-training-split vocabulary,
    context bag-of-words counts, multinomial model."""

    def factory(train_records: list[GatRecord]) -> Predictor:
        tokenized = [tokenize(r.context) for r in train_records]
        vocab = build_vocab(tokenized, min_df=min_df)
        examples = [
            (vectorize(tokens, vocab), r.group_class)
            for tokens, r in zip(tokenized, train_records)
        ]
        model = train_nb(examples, alpha, vocab_size=vocab.size)

        def predict(record: GatRecord) -> GroupClass:
            return predict_nb(model, vectorize(tokenize(record.context), vocab))[0]

        return predict

    factory.descriptor = f"nb(alpha={alpha}, min_df={min_df})"  # type: ignore[attr-defined]
    return factory


def run_cv(
    records: list[GatRecord],
    trainer: Trainer,
    k: int = 10,
    seed: int = 42,
    model: str | None = None,
) -> CvReport:
    """Train on k-1 folds, test on the held-out one, k times over.

    The trainer sees only the training split, so anything it derives
    (vocabulary included) cannot leak from the test fold.
    """
    assignment = stratified_folds(
        [(r.record_id, r.group_class) for r in records], k, seed
    )
    classes = tuple(GroupClass)
    per_fold: list[FoldMetrics] = []
    for fold in range(k):
        train = [r for r in records if assignment.fold_of[r.record_id] != fold]
        test = [r for r in records if assignment.fold_of[r.record_id] == fold]
        predict = trainer(train)
        cm = ConfusionMatrix.from_pairs(
            [(r.group_class, predict(r)) for r in test], classes
        )
        per_fold.append(
            FoldMetrics(fold=fold, mcc=mcc(cm), acc=accuracy(cm), weighted_f1=weighted_f1(cm))
        )
    name = model or getattr(trainer, "descriptor", "classifier")
    values = {
        "mcc": [f.mcc for f in per_fold],
        "acc": [f.acc for f in per_fold],
        "weighted_f1": [f.weighted_f1 for f in per_fold],
    }
    return CvReport(
        model=name,
        k=k,
        seed=seed,
        folds=tuple(per_fold),
        mean={m: statistics.fmean(v) for m, v in values.items()},
        std={m: statistics.stdev(v) for m, v in values.items()},
    )


def evaluate_predictions(
    records: list[GatRecord], preds: PredictionFile
) -> tuple[ConfusionMatrix, dict[str, float]]:
    """Score externally produced predictions against the records' groups."""
    by_id = preds.by_id()
    pairs = []
    for r in records:
        row = by_id.get(r.record_id)
        if row is None:
            raise MissingPrediction(r.record_id)
        pairs.append((r.group_class, row.predicted))
    cm = ConfusionMatrix.from_pairs(pairs, tuple(GroupClass))
    return cm, all_metrics(cm)
