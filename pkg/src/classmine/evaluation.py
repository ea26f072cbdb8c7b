"""Evaluation protocols and metrics.

Two protocols are supported: stratified k-fold cross-validation, where all
out-of-fold predictions are pooled and scored once, and a seeded
percentage split. Error metrics compare predicted class distributions with
one-hot targets; RAE and RRSE are relative to a baseline that always
predicts the training class priors.
"""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from typing import Callable, Protocol, Sequence

import numpy as np

from .dataset import Dataset
from .errors import DataValidationError
from .jrandom import interleave, shuffled_order, stratified_order


class Classifier(Protocol):
    def predict_proba(self, d: Dataset) -> np.ndarray: ...


# a model factory maps a training set to something with predict_proba
ModelFactory = Callable[[Dataset], Classifier]


@dataclass(frozen=True)
class ConfusionMatrix:
    labels: tuple[str, ...]
    counts: np.ndarray

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    @property
    def correct(self) -> int:
        return int(np.trace(self.counts))

    def row_sums(self) -> list[int]:
        return [int(x) for x in self.counts.sum(axis=1)]

    def tolist(self) -> list[list[int]]:
        return [[int(x) for x in row] for row in self.counts]


@dataclass(frozen=True)
class BaselinePredictor:
    """Always predicts the same class distribution."""

    probabilities: np.ndarray

    @classmethod
    def from_labels(cls, y: Sequence[int], n_classes: int) -> "BaselinePredictor":
        counts = np.bincount(np.asarray(y, dtype=int), minlength=n_classes).astype(float)
        return cls(counts / counts.sum())

    def predict_proba(self, n: int) -> np.ndarray:
        return np.tile(self.probabilities, (n, 1))


@dataclass(frozen=True)
class ErrorMetrics:
    mae: float
    rmse: float
    rae_pct: float
    rrse_pct: float


@dataclass
class EvaluationReport:
    correct: int
    incorrect: int
    accuracy_pct: float
    kappa: float
    mae: float
    rmse: float
    rae_pct: float
    rrse_pct: float
    labels: list[str]
    matrix: list[list[int]]
    protocol: dict
    model: str
    seed: int
    extra: dict = field(default_factory=dict)

    @property
    def total(self) -> int:
        return self.correct + self.incorrect

    def confusion(self) -> ConfusionMatrix:
        return ConfusionMatrix(tuple(self.labels), np.array(self.matrix, dtype=int))

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "EvaluationReport":
        return cls(**data)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def _round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5))


def percentage_split(d: Dataset, train_pct: float, seed: int = 1) -> tuple[Dataset, Dataset]:
    """Shuffle with ``seed`` and cut at ``round(N * train_pct / 100)``.

    The shuffle is WEKA's ``randomize`` driven by the Java LCG, so the same
    seed selects the same rows as that toolkit.
    """
    if not 0 < train_pct < 100:
        raise ValueError("train_pct must lie strictly between 0 and 100")
    n = len(d)
    if n < 2:
        raise DataValidationError("percentage split needs at least 2 instances")
    n_train = _round_half_up(n * train_pct / 100)
    if n_train == 0 or n_train == n:
        raise DataValidationError(f"split of {n} instances at {train_pct}% leaves an empty part")
    order = np.array(shuffled_order(n, seed))
    return d.subset(order[:n_train]), d.subset(order[n_train:])


def stratified_folds(d: Dataset, k: int, seed: int = 1) -> list[np.ndarray]:
    """Disjoint row-index arrays, one per fold, with per-class balance.

    Rows are shuffled, grouped by class, then dealt round-robin to the
    folds. Dealing continues across class boundaries, so both the overall
    fold sizes and the per-class fold counts differ by at most one. Shuffle
    and grouping reproduce WEKA's ``randomize`` + ``stratify``.
    """
    n = len(d)
    if k < 2:
        raise ValueError("k must be at least 2")
    if k > n:
        raise DataValidationError(f"cannot make {k} folds from {n} instances")
    y = d.y
    dealt = interleave(stratified_order(shuffled_order(n, seed), y), k)
    folds, start = [], 0
    for f in range(k):
        size = n // k + (1 if f < n % k else 0)
        folds.append(np.array(dealt[start : start + size], dtype=int))
        start += size
    return folds


def confusion_matrix(actual: Sequence, predicted: Sequence, labels: Sequence[str]) -> ConfusionMatrix:
    """Rows are actual labels, columns predicted. Accepts label strings or indices."""
    if len(actual) != len(predicted):
        raise DataValidationError("actual and predicted differ in length")
    if len(actual) == 0:
        raise DataValidationError("confusion matrix needs at least one pair")
    labels = tuple(labels)
    lookup = {lab: i for i, lab in enumerate(labels)}

    def index(v):
        if isinstance(v, str):
            if v not in lookup:
                raise DataValidationError(f"unknown label {v!r}")
            return lookup[v]
        i = int(v)
        if not 0 <= i < len(labels):
            raise DataValidationError(f"unknown label index {i}")
        return i

    m = np.zeros((len(labels), len(labels)), dtype=int)
    for a, p in zip(actual, predicted):
        m[index(a), index(p)] += 1
    return ConfusionMatrix(labels, m)


def kappa(m) -> float:
    """Cohen's kappa of a confusion matrix (array-like or :class:`ConfusionMatrix`)."""
    counts = np.asarray(m.counts if isinstance(m, ConfusionMatrix) else m, dtype=float)
    total = counts.sum()
    if counts.size == 0 or total <= 0:
        raise DataValidationError("kappa of an empty matrix")
    p_o = np.trace(counts) / total
    p_e = float((counts.sum(axis=1) * counts.sum(axis=0)).sum()) / (total * total)
    if p_e == 1:
        return 0.0
    return float((p_o - p_e) / (1 - p_e))


def _mae_rmse(probs: np.ndarray, target: np.ndarray) -> tuple[float, float]:
    diff = probs - target
    return float(np.abs(diff).mean()), float(math.sqrt((diff * diff).mean()))


def probabilistic_errors(
    predictions: np.ndarray,
    actual: Sequence[int],
    baseline: BaselinePredictor,
) -> ErrorMetrics:
    """MAE, RMSE and their percentages relative to ``baseline``.

    With one-hot targets ``t``: MAE averages ``|p_c - t_c|`` over instances
    and classes, RMSE is the root of the mean of ``(p_c - t_c)**2`` over the
    same cells.
    """
    probs = np.asarray(predictions, dtype=float)
    y = np.asarray(actual, dtype=int)
    if probs.ndim != 2 or probs.shape[0] != y.shape[0]:
        raise DataValidationError("predictions and actual labels do not line up")
    if not np.allclose(probs.sum(axis=1), 1.0, atol=1e-9):
        raise DataValidationError("each predicted distribution must sum to 1")
    target = np.zeros_like(probs)
    target[np.arange(y.shape[0]), y] = 1
    mae, rmse = _mae_rmse(probs, target)
    base_mae, base_rmse = _mae_rmse(baseline.predict_proba(y.shape[0]), target)
    if base_mae == 0 or base_rmse == 0:
        raise DataValidationError("baseline error is zero; relative errors are undefined")
    return ErrorMetrics(mae, rmse, 100 * mae / base_mae, 100 * rmse / base_rmse)


@dataclass(frozen=True)
class CrossValidation:
    k: int = 10
    seed: int = 1

    def describe(self) -> dict:
        return {"kind": "cv", "folds": self.k, "seed": self.seed}


@dataclass(frozen=True)
class PercentageSplit:
    train_pct: float = 70.0
    seed: int = 1

    def describe(self) -> dict:
        return {"kind": "split", "train_pct": self.train_pct, "seed": self.seed}


def build_report(
    probs: np.ndarray,
    actual: np.ndarray,
    labels: Sequence[str],
    baseline: BaselinePredictor,
    protocol: dict,
    model: str,
    seed: int,
) -> EvaluationReport:
    predicted = np.argmax(probs, axis=1)
    cm = confusion_matrix(actual, predicted, labels)
    errs = probabilistic_errors(probs, actual, baseline)
    n = cm.total
    return EvaluationReport(
        correct=cm.correct,
        incorrect=n - cm.correct,
        accuracy_pct=100.0 * cm.correct / n,
        kappa=kappa(cm),
        mae=errs.mae,
        rmse=errs.rmse,
        rae_pct=errs.rae_pct,
        rrse_pct=errs.rrse_pct,
        labels=list(labels),
        matrix=cm.tolist(),
        protocol=protocol,
        model=model,
        seed=seed,
    )


def evaluate(
    factory: ModelFactory,
    d: Dataset,
    protocol: CrossValidation | PercentageSplit,
    model_name: str = "model",
) -> EvaluationReport:
    """Run ``protocol`` with models produced by ``factory`` and score them.

    Cross-validation pools the out-of-fold predictions of every fold into a
    single set, with the baseline fitted on the full dataset. A percentage
    split scores the test part, with the baseline fitted on the train part.
    """
    if isinstance(protocol, CrossValidation):
        folds = stratified_folds(d, protocol.k, protocol.seed)
        probs = np.empty((len(d), d.n_classes))
        all_rows = np.arange(len(d))
        for test_rows in folds:
            train_rows = np.setdiff1d(all_rows, test_rows, assume_unique=True)
            model = factory(d.subset(train_rows))
            probs[test_rows] = model.predict_proba(d.subset(test_rows))
        baseline = BaselinePredictor.from_labels(d.y, d.n_classes)
        return build_report(probs, d.y, d.class_labels, baseline, protocol.describe(), model_name, protocol.seed)

    if isinstance(protocol, PercentageSplit):
        train, test = percentage_split(d, protocol.train_pct, protocol.seed)
        model = factory(train)
        probs = model.predict_proba(test)
        baseline = BaselinePredictor.from_labels(train.y, d.n_classes)
        return build_report(probs, test.y, d.class_labels, baseline, protocol.describe(), model_name, protocol.seed)

    raise TypeError(f"unknown protocol {protocol!r}")
