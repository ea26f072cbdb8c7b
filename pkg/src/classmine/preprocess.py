"""Missing-value imputation, min-max normalization and column statistics.

Both filters follow the fit/apply split: ``fit_*`` learns parameters from
one dataset, ``apply_*`` maps any dataset with the same schema. The class
column is never touched.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dataset import Dataset
from .errors import FitError, SchemaError


@dataclass(frozen=True)
class ImputationParams:
    schema: str
    # attribute index -> replacement cell (mean, or category index of the mode)
    fill: dict[int, float]
    names: dict[int, str]

    def to_dict(self) -> dict:
        return {self.names[i]: v for i, v in self.fill.items()}


@dataclass(frozen=True)
class NormalizationParams:
    schema: str
    bounds: dict[int, tuple[float, float]]
    names: dict[int, str]

    def to_dict(self) -> dict:
        return {self.names[i]: {"min": lo, "max": hi} for i, (lo, hi) in self.bounds.items()}


@dataclass(frozen=True)
class ColumnStats:
    minimum: float
    maximum: float
    mean: float
    std: float


def fit_impute(d: Dataset) -> ImputationParams:
    fill, names = {}, {}
    for a in d.features:
        col = d.values[:, a.index]
        known = col[~np.isnan(col)]
        if known.size == 0:
            raise FitError(f"column {a.name!r} has no non-missing values")
        if a.is_numeric:
            fill[a.index] = float(np.mean(known))
        else:
            # argmax returns the first maximum, i.e. the lowest category index
            counts = np.bincount(known.astype(int), minlength=len(a.nominal_values))
            fill[a.index] = float(np.argmax(counts))
        names[a.index] = a.name
    return ImputationParams(d.fingerprint(), fill, names)


def apply_impute(p: ImputationParams, d: Dataset) -> Dataset:
    if d.fingerprint() != p.schema:
        raise SchemaError("dataset schema differs from the one imputation was fitted on")
    if not d.has_missing():
        return d
    values = d.values.copy()
    for idx, v in p.fill.items():
        col = values[:, idx]
        col[np.isnan(col)] = v
    return d.with_values(values)


def fit_normalize(d: Dataset) -> NormalizationParams:
    bounds, names = {}, {}
    for a in d.features:
        if not a.is_numeric:
            continue
        col = d.values[:, a.index]
        if np.isnan(col).any():
            raise FitError(f"column {a.name!r} has missing values; run imputation before normalization")
        bounds[a.index] = (float(col.min()), float(col.max()))
        names[a.index] = a.name
    return NormalizationParams(d.fingerprint(), bounds, names)


def apply_normalize(p: NormalizationParams, d: Dataset) -> Dataset:
    """Map each numeric cell to ``(x - min) / (max - min)``.

    Values outside the fitted range are not clamped. Constant columns map to 0.
    """
    if d.fingerprint() != p.schema:
        raise SchemaError("dataset schema differs from the one normalization was fitted on")
    values = d.values.copy()
    for idx, (lo, hi) in p.bounds.items():
        span = hi - lo
        if span == 0:
            values[:, idx] = np.where(np.isnan(values[:, idx]), np.nan, 0.0)
        else:
            values[:, idx] = (values[:, idx] - lo) / span
    return d.with_values(values)


def descriptive_stats(d: Dataset, ddof: int = 1) -> dict[str, ColumnStats]:
    """Min, max, mean and standard deviation of every numeric predictor.

    ``ddof=1`` gives the sample standard deviation; pass 0 for population.
    Missing cells are ignored.
    """
    out = {}
    for a in d.features:
        if not a.is_numeric:
            continue
        col = d.values[:, a.index]
        col = col[~np.isnan(col)]
        if col.size == 0:
            continue
        std = float(np.std(col, ddof=ddof)) if col.size > ddof else 0.0
        out[a.name] = ColumnStats(float(col.min()), float(col.max()), float(col.mean()), std)
    return out
