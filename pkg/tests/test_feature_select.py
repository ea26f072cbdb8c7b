import math
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from classmine.dataset import NOMINAL, NUMERIC, AttributeSpec, Dataset
from classmine.errors import DataValidationError
from classmine.feature_select import (
    CorrelationCache,
    apply_cuts,
    best_first_select,
    build_correlation_cache,
    cfs_merit,
    mdl_discretize,
    symmetric_uncertainty,
)


def _h(counts):
    n = sum(counts)
    return -sum(c / n * math.log2(c / n) for c in counts if c)


def _mdl_accepts(values, labels, cut_after):
    """Plain-Python statement of the MDL acceptance test for one binary cut."""
    pairs = sorted(zip(values, labels))
    left = [lab for _, lab in pairs[:cut_after]]
    right = [lab for _, lab in pairs[cut_after:]]
    every = [lab for _, lab in pairs]
    classes = sorted(set(every))

    def counts(xs):
        return [xs.count(c) for c in classes]

    n = len(every)
    h, h1, h2 = _h(counts(every)), _h(counts(left)), _h(counts(right))
    gain = h - (len(left) * h1 + len(right) * h2) / n
    k, k1, k2 = len(set(every)), len(set(left)), len(set(right))
    delta = math.log2(3**k - 2) - (k * h - k1 * h1 - k2 * h2)
    return gain > (math.log2(n - 1) + delta) / n, gain


def test_mdl_single_cut_matches_exhaustive_check():
    values, labels = [1, 2, 3, 4], ["A", "A", "B", "B"]
    verdicts = {i: _mdl_accepts(values, labels, i) for i in (1, 2, 3)}
    # the best-entropy candidate is after the 2nd value and it passes the test
    best = max(verdicts, key=lambda i: verdicts[i][1])
    assert best == 2 and verdicts[best][0]
    assert mdl_discretize(values, labels) == [2.5]


def test_mdl_no_cut_for_pure_labels():
    assert mdl_discretize([1, 2, 3, 4, 5], ["A"] * 5) == []


def test_mdl_no_cut_for_repeated_value():
    assert mdl_discretize([7, 7, 7, 7], ["A", "B", "A", "B"]) == []


def test_mdl_length_mismatch():
    with pytest.raises(DataValidationError):
        mdl_discretize([1, 2], ["A"])


def test_apply_cuts_boundary_goes_left():
    assert list(apply_cuts([1.0, 2.5, 2.6, np.nan], [2.5])) == [0, 0, 1, -1]


def test_su_identical_columns():
    assert symmetric_uncertainty([0, 1, 1, 2], [0, 1, 1, 2]) == pytest.approx(1.0)


def test_su_exact_independence():
    # joint table is the product of the margins: H(X)=H(Y)=1, H(X,Y)=2
    assert symmetric_uncertainty(["a", "a", "b", "b"], ["p", "q", "p", "q"]) == 0.0


def test_su_constant_columns():
    assert symmetric_uncertainty([1, 1, 1], [2, 2, 2]) == 0.0


def test_su_length_mismatch():
    with pytest.raises(DataValidationError):
        symmetric_uncertainty([1, 2], [1])


@settings(max_examples=200, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 3), st.integers(0, 4)), min_size=1, max_size=40))
def test_su_symmetric_and_bounded(pairs):
    x = [a for a, _ in pairs]
    y = [b for _, b in pairs]
    s = symmetric_uncertainty(x, y)
    assert s == symmetric_uncertainty(y, x)
    assert 0.0 <= s <= 1.0


def _cache(fc, ff):
    return CorrelationCache(dict(fc), dict(ff))


def test_merit_single_feature():
    assert cfs_merit([3], _cache({3: 0.4}, {})) == pytest.approx(0.4)


def test_merit_two_redundant_features():
    c = _cache({0: 0.5, 1: 0.5}, {(0, 1): 1.0})
    assert cfs_merit([0, 1], c) == pytest.approx(1.0 / math.sqrt(4))


def test_merit_empty_set():
    assert cfs_merit([], _cache({}, {})) == 0.0


def test_merit_missing_member():
    with pytest.raises(KeyError):
        cfs_merit([0, 9], _cache({0: 0.1}, {}))


def test_merit_order_invariant():
    c = _cache({0: 0.3, 1: 0.2, 2: 0.6}, {(0, 1): 0.1, (0, 2): 0.4, (1, 2): 0.05})
    assert cfs_merit([2, 0, 1], c) == cfs_merit([0, 1, 2], c) == cfs_merit((1, 2, 0), c)


def _dataset(features: np.ndarray, y: np.ndarray, kinds=None) -> Dataset:
    k = features.shape[1]
    kinds = kinds or [NUMERIC] * k
    attrs = []
    for i in range(k):
        if kinds[i] == NOMINAL:
            cats = tuple(f"v{j}" for j in range(int(features[:, i].max()) + 1))
            attrs.append(AttributeSpec(f"f{i}", NOMINAL, cats, i))
        else:
            attrs.append(AttributeSpec(f"f{i}", NUMERIC, (), i))
    attrs.append(AttributeSpec("class", NOMINAL, ("a", "b"), k))
    return Dataset(tuple(attrs), k, np.column_stack([features, y]))


def _exhaustive_best(d: Dataset):
    cache = build_correlation_cache(d)
    best, best_merit = (), 0.0
    feats = d.feature_indices
    for r in range(1, len(feats) + 1):
        for s in combinations(feats, r):
            m = cfs_merit(s, cache)
            if m > best_merit + 1e-12:
                best, best_merit = s, m
    return best, best_merit


def test_feature_equal_to_class_wins():
    rng = np.random.default_rng(3)
    y = np.array([0, 1] * 20)
    X = np.column_stack([y, rng.normal(size=40), rng.integers(0, 3, size=40), rng.normal(size=40)])
    d = _dataset(X.astype(float), y)
    best, merit = _exhaustive_best(d)
    assert best == (0,) and merit == pytest.approx(1.0)
    s = best_first_select(d, locally_predictive=False)
    assert s.members == {0} and s.merit == pytest.approx(1.0)


def test_all_constant_features_select_nothing():
    y = np.array([0, 1, 0, 1, 1])
    d = _dataset(np.ones((5, 3)), y)
    s = best_first_select(d)
    assert s.members == frozenset() and s.merit == 0.0


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 6), st.integers(0, 2**32 - 1))
def test_best_first_matches_exhaustive(n_features, seed):
    rng = np.random.default_rng(seed)
    n = 100
    y = rng.integers(0, 2, size=n)
    cols = []
    for _ in range(n_features):
        kind = rng.integers(0, 3)
        if kind == 0:
            cols.append(rng.normal(size=n) + y * rng.uniform(0, 2))
        elif kind == 1:
            cols.append(rng.normal(size=n))
        else:
            # noisy copy of an earlier column or the class
            base = cols[-1] if cols else y.astype(float)
            cols.append(base + rng.normal(scale=0.5, size=n))
    d = _dataset(np.column_stack(cols), y)
    _, oracle = _exhaustive_best(d)
    got = best_first_select(d, locally_predictive=False)
    assert got.merit == pytest.approx(oracle, abs=1e-12)


def test_pima_selection(pima_prepared):
    s = best_first_select(pima_prepared)
    assert set(s.names(pima_prepared)) == {"plas", "mass", "pedi", "age"}
    assert s.merit > 0


def test_pima_search_alone_and_locally_predictive_pass(pima_prepared):
    bare = best_first_select(pima_prepared, locally_predictive=False)
    assert set(bare.names(pima_prepared)) == {"plas", "mass", "age"}
    assert set(best_first_select(pima_prepared).members) > set(bare.members)


def test_selection_invariant_under_normalization(pima, pima_prepared):
    assert best_first_select(pima).members == best_first_select(pima_prepared).members


def test_cache_values_in_range(pima_prepared):
    c = build_correlation_cache(pima_prepared)
    for v in list(c.su_fc.values()) + list(c.su_ff.values()):
        assert 0.0 <= v <= 1.0
    assert c.feature_feature(1, 1) == 1.0
    assert c.feature_feature(1, 5) == c.feature_feature(5, 1)
