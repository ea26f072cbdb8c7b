"""Correlation-based feature subset selection.

Numeric attributes are first discretized against the class with the
Fayyad-Irani MDL criterion. Pairwise correlation is symmetric uncertainty
over the discretized columns, and subsets are scored with the CFS merit

    merit(S) = k * mean_fc / sqrt(k + k (k - 1) * mean_ff)

where ``mean_fc`` is the average feature-class correlation and ``mean_ff``
the average feature-feature correlation over the ``k`` members of ``S``.
A forward best-first search looks for the subset with the highest merit.
Optionally, a locally-predictive pass then adds back features whose class
correlation is strictly higher than their correlation with every feature
already selected.
"""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from .dataset import Dataset
from .errors import DataValidationError

# merits closer than this are treated as ties
MERIT_EPS = 1e-12


@dataclass(frozen=True)
class FeatureSubset:
    members: frozenset[int]
    merit: float

    def names(self, d: Dataset) -> list[str]:
        return [d.attributes[i].name for i in sorted(self.members)]


@dataclass(frozen=True)
class CorrelationCache:
    """Symmetric uncertainties keyed by dataset attribute index."""

    su_fc: dict[int, float]
    su_ff: dict[tuple[int, int], float]

    def feature_class(self, i: int) -> float:
        try:
            return self.su_fc[i]
        except KeyError:
            raise KeyError(f"attribute {i} not in correlation cache") from None

    def feature_feature(self, i: int, j: int) -> float:
        if i == j:
            return 1.0
        key = (i, j) if i < j else (j, i)
        try:
            return self.su_ff[key]
        except KeyError:
            raise KeyError(f"pair {key} not in correlation cache") from None


def _entropy_of_counts(counts: np.ndarray) -> float:
    n = counts.sum()
    if n <= 0:
        return 0.0
    p = counts[counts > 0] / n
    return float(-(p * np.log2(p)).sum())


def mdl_discretize(values: Sequence[float], labels: Sequence[int]) -> list[float]:
    """Supervised MDL cut points for one numeric column.

    Returns an ascending list of thresholds; an empty list means the column
    collapses into a single bin. Cuts sit midway between adjacent distinct
    values.
    """
    x = np.asarray(values, dtype=float)
    y = np.asarray(labels)
    if x.shape[0] != y.shape[0]:
        raise DataValidationError("values and labels differ in length")
    if x.shape[0] == 0:
        raise DataValidationError("cannot discretize an empty column")
    keep = ~np.isnan(x)
    x, y = x[keep], y[keep]
    _, y = np.unique(y, return_inverse=True)
    order = np.argsort(x, kind="stable")
    x, y = x[order], y[order]
    n_classes = int(y.max()) + 1 if y.size else 0
    cuts: list[float] = []
    _mdl_split(x, y, n_classes, cuts)
    return sorted(cuts)


def _mdl_split(x: np.ndarray, y: np.ndarray, n_classes: int, cuts: list[float]) -> None:
    n = x.shape[0]
    if n < 2:
        return
    onehot = np.zeros((n, n_classes))
    onehot[np.arange(n), y] = 1
    left = np.cumsum(onehot, axis=0)
    total = left[-1]
    # boundary positions: after row i where x[i] < x[i+1]
    bounds = np.flatnonzero(x[:-1] < x[1:])
    if bounds.size == 0:
        return

    best_pos, best_ent = -1, math.inf
    for i in bounds:
        lc = left[i]
        rc = total - lc
        nl = i + 1
        ent = (nl * _entropy_of_counts(lc) + (n - nl) * _entropy_of_counts(rc)) / n
        if ent < best_ent - 1e-12:
            best_pos, best_ent = i, ent

    lc = left[best_pos]
    rc = total - lc
    h_all = _entropy_of_counts(total)
    h_l, h_r = _entropy_of_counts(lc), _entropy_of_counts(rc)
    gain = h_all - best_ent
    k = int((total > 0).sum())
    k1 = int((lc > 0).sum())
    k2 = int((rc > 0).sum())
    delta = math.log2(3**k - 2) - (k * h_all - k1 * h_l - k2 * h_r)
    threshold = (math.log2(n - 1) + delta) / n
    if gain <= threshold:
        return
    cuts.append(float((x[best_pos] + x[best_pos + 1]) / 2))
    split = best_pos + 1
    _mdl_split(x[:split], y[:split], n_classes, cuts)
    _mdl_split(x[split:], y[split:], n_classes, cuts)


def apply_cuts(values: Sequence[float], cuts: Sequence[float]) -> np.ndarray:
    """Bin index per value; ``x <= cuts[0]`` lands in bin 0. NaN maps to -1."""
    x = np.asarray(values, dtype=float)
    bins = np.searchsorted(np.asarray(cuts, dtype=float), x, side="left")
    return np.where(np.isnan(x), -1, bins)


def symmetric_uncertainty(x: Sequence, y: Sequence) -> float:
    """``2 * I(X; Y) / (H(X) + H(Y))`` for two discrete columns, 0 if both are constant."""
    x = np.asarray(x)
    y = np.asarray(y)
    if x.shape[0] != y.shape[0]:
        raise DataValidationError("columns differ in length")
    if x.shape[0] == 0:
        return 0.0
    _, xi = np.unique(x, return_inverse=True)
    _, yi = np.unique(y, return_inverse=True)
    joint = np.zeros((xi.max() + 1, yi.max() + 1))
    np.add.at(joint, (xi, yi), 1)
    hx = _entropy_of_counts(joint.sum(axis=1))
    hy = _entropy_of_counts(joint.sum(axis=0))
    # sorted so the sum does not depend on which column is X
    hxy = _entropy_of_counts(np.sort(joint.ravel()))
    denom = hx + hy
    if denom <= 0:
        return 0.0
    su = 2.0 * (hx + hy - hxy) / denom
    return min(1.0, max(0.0, su))


def discretize_dataset(d: Dataset) -> dict[int, np.ndarray]:
    """Discrete code column for every predictor of ``d``."""
    y = d.y
    out = {}
    for a in d.features:
        col = d.values[:, a.index]
        if a.is_numeric:
            out[a.index] = apply_cuts(col, mdl_discretize(col, y))
        else:
            out[a.index] = np.where(np.isnan(col), -1, col).astype(int)
    return out


def build_correlation_cache(d: Dataset) -> CorrelationCache:
    codes = discretize_dataset(d)
    y = d.y
    idx = sorted(codes)
    su_fc = {i: symmetric_uncertainty(codes[i], y) for i in idx}
    su_ff = {(i, j): symmetric_uncertainty(codes[i], codes[j]) for i, j in combinations(idx, 2)}
    return CorrelationCache(su_fc, su_ff)


def cfs_merit(members: Iterable[int], cache: CorrelationCache) -> float:
    members = sorted(set(members))
    k = len(members)
    if k == 0:
        return 0.0
    r_cf = sum(cache.feature_class(i) for i in members)
    r_ff = sum(cache.feature_feature(i, j) for i, j in combinations(members, 2))
    # k * mean_fc == r_cf and k (k - 1) * mean_ff == 2 * r_ff
    denom = math.sqrt(k + 2.0 * r_ff)
    return r_cf / denom if denom > 0 else 0.0


def _rank_key(subset: tuple[int, ...], merit: float) -> tuple:
    # heap order: higher merit, then smaller subset, then lower indices
    return (-merit, len(subset), subset)


def _better(a: tuple[int, ...], ma: float, b: tuple[int, ...], mb: float) -> bool:
    if ma > mb + MERIT_EPS:
        return True
    if ma < mb - MERIT_EPS:
        return False
    return (len(a), a) < (len(b), b)


def add_locally_predictive(members: Iterable[int], candidates: Iterable[int], cache: CorrelationCache) -> set[int]:
    """Greedily add features more correlated with the class than with any member.

    Candidates are visited by decreasing class correlation (ties: lower
    index). Each accepted feature joins the set the next candidates are
    checked against.
    """
    selected = set(members)
    rest = sorted((f for f in candidates if f not in selected), key=lambda f: (-cache.feature_class(f), f))
    for f in rest:
        r_cf = cache.feature_class(f)
        if all(r_cf > cache.feature_feature(f, j) for j in selected) and r_cf > 0:
            selected.add(f)
    return selected


def best_first_select(
    d: Dataset,
    search_termination: int = 5,
    cache: CorrelationCache | None = None,
    locally_predictive: bool = True,
) -> FeatureSubset:
    """Forward best-first search over predictor subsets, starting from the empty set.

    The best open node is expanded by adding each absent feature. Search
    stops after ``search_termination`` consecutive expansions that fail to
    raise the best merit, or when the open list is empty. With
    ``locally_predictive`` the search result is extended by
    :func:`add_locally_predictive`; the reported merit is that of the final
    subset.
    """
    if cache is None:
        cache = build_correlation_cache(d)
    features = d.feature_indices
    start: tuple[int, ...] = ()
    seen = {start}
    open_list = [(_rank_key(start, 0.0), start, 0.0)]
    best, best_merit = start, 0.0
    stale = 0
    while open_list and stale < search_termination:
        _, node, _ = heapq.heappop(open_list)
        improved = False
        for f in features:
            if f in node:
                continue
            child = tuple(sorted(node + (f,)))
            if child in seen:
                continue
            seen.add(child)
            m = cfs_merit(child, cache)
            heapq.heappush(open_list, (_rank_key(child, m), child, m))
            if m > best_merit + MERIT_EPS:
                improved = True
            if _better(child, m, best, best_merit):
                best, best_merit = child, m
        stale = 0 if improved else stale + 1
    if locally_predictive and best:
        members = add_locally_predictive(best, features, cache)
        return FeatureSubset(frozenset(members), cfs_merit(members, cache))
    return FeatureSubset(frozenset(best), best_merit)
