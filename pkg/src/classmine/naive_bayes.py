"""Naive Bayes with Gaussian numeric likelihoods and Laplace-smoothed counts.

Scores are accumulated in the log domain,
``log P(c) + sum_a log P(x_a | c)``, and turned into posteriors by
max-shifted exponentiation followed by normalization. That normalization is
the division by the evidence ``P(x)``.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .dataset import Dataset
from .errors import DataValidationError, FitError
from .prediction import Prediction

STD_FLOOR = 1e-6
_LOG_SQRT_2PI = 0.5 * math.log(2 * math.pi)


@dataclass(frozen=True)
class GaussianParams:
    mean: float
    std: float

    def log_density(self, x):
        z = (np.asarray(x, dtype=float) - self.mean) / self.std
        return -0.5 * z * z - math.log(self.std) - _LOG_SQRT_2PI


@dataclass(frozen=True)
class NaiveBayesModel:
    schema: str
    class_labels: tuple[str, ...]
    attribute_names: tuple[str, ...]
    priors: np.ndarray
    # (class index, attribute index) -> params
    numeric: dict[tuple[int, int], GaussianParams]
    # attribute index -> (n_classes, n_values) row-stochastic matrix
    nominal: dict[int, np.ndarray]

    def log_scores(self, inst) -> np.ndarray:
        scores = np.log(self.priors).copy()
        for (c, a), g in self.numeric.items():
            x = inst[a]
            if np.isnan(x):
                raise DataValidationError(f"missing value for {self.attribute_names[a]!r}")
            scores[c] += g.log_density(x)
        for a, table in self.nominal.items():
            x = inst[a]
            if np.isnan(x):
                raise DataValidationError(f"missing value for {self.attribute_names[a]!r}")
            scores += np.log(table[:, int(x)])
        if not np.isfinite(scores).all():
            raise DataValidationError("non-finite class score")
        return scores

    def posterior(self, inst) -> Prediction:
        return Prediction(tuple(float(p) for p in _normalize_log(self.log_scores(inst))))

    def predict_proba(self, d: Dataset) -> np.ndarray:
        if d.fingerprint() != self.schema:
            raise DataValidationError("dataset schema differs from the training schema")
        return np.array([self.posterior(row).probabilities for row in d.values])

    def to_dict(self) -> dict:
        out = {
            "schema": self.schema,
            "class_labels": list(self.class_labels),
            "priors": {lab: float(p) for lab, p in zip(self.class_labels, self.priors)},
            "gaussians": {},
            "nominal": {},
        }
        for (c, a), g in sorted(self.numeric.items()):
            out["gaussians"].setdefault(self.class_labels[c], {})[self.attribute_names[a]] = {
                "mean": g.mean,
                "std": g.std,
            }
        for a, table in sorted(self.nominal.items()):
            out["nominal"][self.attribute_names[a]] = table.tolist()
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def _normalize_log(scores: np.ndarray) -> np.ndarray:
    shifted = np.exp(scores - scores.max())
    return shifted / shifted.sum()


def posterior(m: NaiveBayesModel, inst) -> Prediction:
    return m.posterior(inst)


def fit_nb(d: Dataset, std_floor: float = STD_FLOOR) -> NaiveBayesModel:
    """Fit priors ``(n_c + 1) / (N + C)`` and per-class likelihoods.

    Numeric attributes use the per-class mean and population standard
    deviation, floored at ``std_floor``. A class with no training instances
    gets mean 0 and the floor. Nominal likelihoods are
    ``(count + 1) / (n_c + V)``.
    """
    n = len(d)
    if n == 0:
        raise FitError("cannot fit naive Bayes on an empty dataset")
    if np.isnan(d.values[:, d.feature_indices]).any():
        raise FitError("training data has missing values; impute before fitting")
    y = d.y
    C = d.n_classes
    class_counts = np.bincount(y, minlength=C).astype(float)
    priors = (class_counts + 1) / (n + C)

    numeric, nominal = {}, {}
    for a in d.features:
        col = d.values[:, a.index]
        if a.is_numeric:
            for c in range(C):
                vals = col[y == c]
                if vals.size:
                    mean = float(math.fsum(vals) / vals.size)
                    std = float(np.sqrt(math.fsum((vals - mean) ** 2) / vals.size))
                else:
                    mean, std = 0.0, 0.0
                numeric[(c, a.index)] = GaussianParams(mean, max(std, std_floor))
        else:
            V = len(a.nominal_values)
            table = np.ones((C, V))
            np.add.at(table, (y, col.astype(int)), 1)
            nominal[a.index] = table / table.sum(axis=1, keepdims=True)
    return NaiveBayesModel(
        d.fingerprint(),
        d.class_labels,
        tuple(a.name for a in d.attributes),
        priors,
        numeric,
        nominal,
    )
