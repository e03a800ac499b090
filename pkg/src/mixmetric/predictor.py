"""Similarity-weighted nearest-neighbor classification.

Each training row contributes its record similarity to the query as a
continuous match score; the k best rows vote with those scores, summed per
class. Everything is deterministic: similarity ties break toward the lower
row index, label ties toward the lexicographically smaller class, and class
scores accumulate in neighbor rank order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .dataset import Dataset, Value
from .errors import DataError, MetricError, MixMetricError
from .metric import FittedMetric, fit_metric, record_similarity


@dataclass(frozen=True)
class TrainedPredictor:
    """Fitted metric plus the (target-bearing) training rows it judges with."""

    fm: FittedMetric
    data: Dataset
    classes: tuple[str, ...]

    def __post_init__(self) -> None:
        if self.fm.schema.target is None:
            raise DataError("predictor needs a schema with a target attribute")
        if self.data.schema != self.fm.schema:
            raise DataError("training data schema does not match the fitted metric's schema")
        targets = self.data.target_column()
        if any(t is None for t in targets):
            raise DataError("every retained training row must have a target value")
        if tuple(sorted(set(targets))) != self.classes:
            raise DataError("classes must be the sorted distinct target labels")

    @property
    def n_rows(self) -> int:
        return self.data.n_rows


@dataclass(frozen=True)
class PredictionResult:
    """Chosen label, the per-class vote totals, and the neighbors that voted."""

    label: str
    class_scores: dict[str, float]
    neighbors: tuple[tuple[int, float], ...]


def _usable_rows(data: Dataset) -> list[int]:
    targets = data.target_column()
    return [i for i, t in enumerate(targets) if t is not None]


def predictor_from_fitted(fm: FittedMetric, data: Dataset) -> TrainedPredictor:
    """Attach training rows to an already-fitted metric.

    Rows with a missing target are dropped; the models in `fm` are used as
    given, without refitting.
    """
    if fm.schema.target is None:
        raise DataError("predictor needs a schema with a target attribute")
    if data.schema != fm.schema:
        raise DataError("training data schema does not match the fitted metric's schema")
    keep = _usable_rows(data)
    if not keep:
        raise DataError("no training rows with a target value")
    kept = data.select_rows(keep) if len(keep) < data.n_rows else data
    classes = tuple(sorted(set(kept.target_column())))
    return TrainedPredictor(fm=fm, data=kept, classes=classes)


def train(data: Dataset) -> TrainedPredictor:
    """Drop rows without a target, fit all attribute models on what remains,
    and retain those rows for prediction."""
    if data.schema.target is None:
        raise DataError("training data schema declares no target attribute")
    keep = _usable_rows(data)
    if not keep:
        raise DataError("no training rows with a target value")
    kept = data.select_rows(keep) if len(keep) < data.n_rows else data
    return predictor_from_fitted(fit_metric(kept), kept)


def predict(p: TrainedPredictor, query: Sequence[Value], k: int) -> PredictionResult:
    """Similarity-weighted vote of the k training rows most similar to `query`.

    `k` larger than the training set clamps down to it. Rows against which
    the query shares no comparable attribute are skipped; if that happens
    against every row, there is nothing to vote with and the call fails.
    """
    if k < 1:
        raise DataError(f"k must be at least 1, got {k}")
    sims: list[tuple[int, float]] = []
    for t in range(p.n_rows):
        try:
            s = record_similarity(p.fm, query, p.data.feature_row(t))
        except MetricError:
            continue
        sims.append((t, s))
    if not sims:
        raise MetricError("no comparable attributes against any training row")
    ranked = sorted(sims, key=lambda ts: (-ts[1], ts[0]))
    selected = ranked[: min(k, len(ranked))]
    targets = p.data.target_column()
    scores = {c: 0.0 for c in p.classes}
    for t, s in selected:
        scores[targets[t]] += s
    label = p.classes[0]
    best = scores[label]
    for c in p.classes[1:]:
        if scores[c] > best:
            label, best = c, scores[c]
    return PredictionResult(label=label, class_scores=scores, neighbors=tuple(selected))


def loo_accuracy(data: Dataset, k: int) -> float:
    """Leave-one-out accuracy: refit on the other rows, predict each row,
    score the fraction predicted correctly."""
    n = data.n_rows
    if n < 2:
        raise DataError(f"leave-one-out needs at least 2 rows, got {n}")
    targets = data.target_column()
    for i, t in enumerate(targets):
        if t is None:
            raise DataError(f"row {i + 1} has a missing target; cannot score it")
    correct = 0
    indices = list(range(n))
    for i in range(n):
        rest = data.select_rows(indices[:i] + indices[i + 1 :])
        try:
            p = train(rest)
            result = predict(p, data.feature_row(i), k)
        except MixMetricError as exc:
            raise type(exc)(f"leave-one-out fold {i + 1}: {exc}") from exc
        if result.label == targets[i]:
            correct += 1
    return correct / n
