"""C4.5-style decision tree induction.

Numeric attributes get binary ``<= t`` / ``> t`` tests with ``t`` at the
midpoint between adjacent distinct training values; nominal attributes get
one branch per category. The split is chosen by gain ratio among the
candidates whose information gain is at least the average positive gain
(or by raw information gain when asked). Pruning is pessimistic subtree
replacement driven by an upper confidence bound on each leaf's error rate.
"""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .dataset import Dataset
from .errors import DataValidationError, FitError
from .prediction import Prediction

GAIN_RATIO = "gain_ratio"
INFO_GAIN = "info_gain"

_EPS = 1e-12


@dataclass(frozen=True)
class TreeParams:
    """Induction settings.

    ``min_split_fraction`` sets the per-branch minimum of a numeric split to
    ``fraction * n_node / n_classes`` clamped to ``[min_leaf_instances, 25]``;
    0 leaves just ``min_leaf_instances``. ``mdl_correction`` subtracts
    ``log2(n_candidate_thresholds) / n_node`` from a numeric split's gain.
    ``collapse`` replaces, before pruning, every subtree that makes no fewer
    training errors than a leaf would.
    """

    min_leaf_instances: int = 2
    confidence_factor: float = 0.25
    prune: bool = True
    split_criterion: str = GAIN_RATIO
    min_split_fraction: float = 0.1
    mdl_correction: bool = True
    collapse: bool = True

    def __post_init__(self):
        if self.min_leaf_instances < 1:
            raise ValueError("min_leaf_instances must be >= 1")
        if not 0 < self.confidence_factor < 1:
            raise ValueError("confidence_factor must lie in (0, 1)")
        if self.split_criterion not in (GAIN_RATIO, INFO_GAIN):
            raise ValueError(f"unknown split criterion {self.split_criterion!r}")
        if self.min_split_fraction < 0:
            raise ValueError("min_split_fraction must be non-negative")


@dataclass
class TreeNode:
    """Leaf when ``attribute`` is None, otherwise an internal test.

    ``counts`` are the training class counts that reached the node. An empty
    leaf (no training instances, possible under a nominal split) predicts
    from ``fallback``, its parent's counts.
    """

    counts: np.ndarray
    attribute: int | None = None
    threshold: float | None = None
    children: list["TreeNode"] = field(default_factory=list)
    fallback: np.ndarray | None = None

    @property
    def is_leaf(self) -> bool:
        return self.attribute is None

    @property
    def n(self) -> float:
        return float(self.counts.sum())

    @property
    def label_index(self) -> int:
        return int(np.argmax(self._predictive_counts()))

    def _predictive_counts(self) -> np.ndarray:
        if self.counts.sum() == 0 and self.fallback is not None:
            return self.fallback
        return self.counts

    def distribution(self) -> np.ndarray:
        c = self._predictive_counts().astype(float)
        total = c.sum()
        if total == 0:
            return np.full(c.shape, 1.0 / c.size)
        return c / total

    def n_nodes(self) -> int:
        return 1 + sum(ch.n_nodes() for ch in self.children)

    def n_leaves(self) -> int:
        if self.is_leaf:
            return 1
        return sum(ch.n_leaves() for ch in self.children)

    def depth(self) -> int:
        if self.is_leaf:
            return 0
        return 1 + max(ch.depth() for ch in self.children)

    def make_leaf(self) -> "TreeNode":
        return TreeNode(self.counts.copy(), fallback=self.fallback)


def entropy(counts) -> float:
    """Entropy in bits of a class-count vector."""
    c = np.asarray(counts, dtype=float)
    if (c < 0).any():
        raise ValueError("counts must be non-negative")
    total = c.sum()
    if total <= 0:
        raise ValueError("entropy needs at least one positive count")
    p = c[c > 0] / total
    return float(-(p * np.log2(p)).sum())


def split_gain(parent_counts, child_counts_list) -> tuple[float, float]:
    """Information gain and gain ratio of partitioning ``parent_counts``.

    Returns
    -------
    tuple
        ``(info_gain, gain_ratio)``; the ratio is 0 when the split
        information is 0.
    """
    parent = np.asarray(parent_counts, dtype=float)
    children = [np.asarray(c, dtype=float) for c in child_counts_list]
    if not children or not np.allclose(np.sum(children, axis=0), parent):
        raise ValueError("child counts do not sum to the parent counts")
    n = parent.sum()
    sizes = np.array([c.sum() for c in children])
    remainder = sum((s / n) * entropy(c) for c, s in zip(children, sizes) if s > 0)
    gain = entropy(parent) - remainder
    if abs(gain) < _EPS:
        gain = 0.0
    split_info = entropy(sizes) if (sizes > 0).sum() > 1 else 0.0
    ratio = gain / split_info if split_info > 0 else 0.0
    return gain, ratio


# C4.5's confidence-to-deviate table; z is linearly interpolated between rows
_CF_TABLE = (0.0, 0.001, 0.005, 0.01, 0.05, 0.10, 0.20, 0.40, 1.00)
_Z_TABLE = (4.0, 3.09, 2.58, 2.33, 1.65, 1.28, 0.84, 0.25, 0.00)


def confidence_z(cf: float) -> float:
    """Normal deviate for a pruning confidence factor (0.25 -> 0.6925)."""
    i = 0
    while cf > _CF_TABLE[i]:
        i += 1
    if i == 0:
        return _Z_TABLE[0]
    lo, hi = _CF_TABLE[i - 1], _CF_TABLE[i]
    return _Z_TABLE[i - 1] + (_Z_TABLE[i] - _Z_TABLE[i - 1]) * (cf - lo) / (hi - lo)


def added_errors(n: float, e: float, cf: float) -> float:
    """Extra errors predicted for a leaf with ``e`` errors out of ``n`` cases.

    ``e + added_errors(n, e, cf)`` equals ``n * U_cf(e, n)`` where ``U_cf`` is
    the upper confidence limit of the binomial error rate. The exact
    binomial limit is used for ``e == 0``, linear interpolation for
    ``0 < e < 1`` and the continuity-corrected normal approximation above.
    """
    if n <= 0:
        return 0.0
    if e < 1e-6:
        return n * (1 - math.exp(math.log(cf) / n))
    if e < 0.9999:
        v = n * (1 - math.exp(math.log(cf) / n))
        return v + e * (added_errors(n, 1.0, cf) - v)
    if e + 0.5 >= n:
        return 0.67 * (n - e)
    z = confidence_z(cf)
    f = e + 0.5
    upper = (f + z * z / 2 + z * math.sqrt(z * z / 4 + f * (1 - f / n))) / (n + z * z)
    return n * upper - e


def leaf_estimated_errors(counts: np.ndarray, cf: float) -> float:
    n = float(counts.sum())
    if n == 0:
        return 0.0
    e = n - float(counts.max())
    return e + added_errors(n, e, cf)


@dataclass
class DecisionTree:
    root: TreeNode
    schema: str
    params: TreeParams
    attribute_names: tuple[str, ...]
    nominal_values: tuple[tuple[str, ...], ...]
    class_labels: tuple[str, ...]

    def predict(self, inst) -> Prediction:
        node = self.root
        while not node.is_leaf:
            x = inst[node.attribute]
            if np.isnan(x):
                raise DataValidationError(
                    f"missing value for {self.attribute_names[node.attribute]!r}; impute before prediction"
                )
            if node.threshold is not None:
                node = node.children[0] if x <= node.threshold else node.children[1]
            else:
                node = node.children[int(x)]
        return Prediction(tuple(float(p) for p in node.distribution()))

    def predict_proba(self, d: Dataset) -> np.ndarray:
        if d.fingerprint() != self.schema:
            raise DataValidationError("dataset schema differs from the training schema")
        return np.array([self.predict(row).probabilities for row in d.values])

    @property
    def n_nodes(self) -> int:
        return self.root.n_nodes()

    @property
    def n_leaves(self) -> int:
        return self.root.n_leaves()

    def _describe(self, node: TreeNode) -> dict:
        out = {"counts": [int(c) if float(c).is_integer() else float(c) for c in node.counts]}
        if node.is_leaf:
            out["label"] = self.class_labels[node.label_index]
            return out
        name = self.attribute_names[node.attribute]
        out["attribute"] = name
        if node.threshold is not None:
            out["threshold"] = node.threshold
            out["branches"] = [
                {"test": "<=", **self._describe(node.children[0])},
                {"test": ">", **self._describe(node.children[1])},
            ]
        else:
            vals = self.nominal_values[node.attribute]
            out["branches"] = [{"test": "=", "value": v, **self._describe(ch)} for v, ch in zip(vals, node.children)]
        return out

    def to_dict(self) -> dict:
        return {
            "params": asdict(self.params),
            "schema": self.schema,
            "class_labels": list(self.class_labels),
            "n_nodes": self.n_nodes,
            "n_leaves": self.n_leaves,
            "root": self._describe(self.root),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def to_text(self) -> str:
        """One node per line, children indented by ``|   ``."""
        lines: list[str] = []

        def counts_str(node):
            return "/".join(str(int(c)) for c in node.counts)

        def walk(node: TreeNode, depth: int):
            pad = "|   " * depth
            name = self.attribute_names[node.attribute]
            if node.threshold is not None:
                tests = [f"<= {node.threshold:.6g}", f"> {node.threshold:.6g}"]
            else:
                tests = [f"= {v}" for v in self.nominal_values[node.attribute]]
            for test, child in zip(tests, node.children):
                if child.is_leaf:
                    lines.append(
                        f"{pad}{name} {test}: {self.class_labels[child.label_index]} ({counts_str(child)})"
                    )
                else:
                    lines.append(f"{pad}{name} {test} ({counts_str(child)})")
                    walk(child, depth + 1)

        if self.root.is_leaf:
            lines.append(f": {self.class_labels[self.root.label_index]} ({counts_str(self.root)})")
        else:
            walk(self.root, 0)
        lines.append("")
        lines.append(f"Number of Leaves  : {self.n_leaves}")
        lines.append(f"Size of the tree  : {self.n_nodes}")
        return "\n".join(lines)


def _class_counts(y: np.ndarray, n_classes: int) -> np.ndarray:
    return np.bincount(y, minlength=n_classes).astype(float)


def _min_split(n: int, n_classes: int, params: TreeParams) -> float:
    m = params.min_split_fraction * n / n_classes
    return min(max(m, params.min_leaf_instances), max(25, params.min_leaf_instances))


def _best_numeric_split(x, y, n_classes, min_leaf, mdl_correction=False):
    """Best threshold of one numeric column by information gain.

    Returns ``(gain, ratio, threshold)`` or None when no threshold leaves
    ``min_leaf`` instances on both sides (or the corrected gain is not
    positive).
    """
    order = np.argsort(x, kind="stable")
    xs, ys = x[order], y[order]
    n = xs.shape[0]
    onehot = np.zeros((n, n_classes))
    onehot[np.arange(n), ys] = 1
    left = np.cumsum(onehot, axis=0)
    total = left[-1]
    h_parent = entropy(total)
    best = None
    n_candidates = 0
    for i in np.flatnonzero(xs[:-1] < xs[1:]):
        nl = i + 1
        if nl < min_leaf or n - nl < min_leaf:
            continue
        n_candidates += 1
        lc = left[i]
        rc = total - lc
        gain = h_parent - (nl * _safe_entropy(lc) + (n - nl) * _safe_entropy(rc)) / n
        # strict comparison keeps the lowest threshold on ties
        if best is None or gain > best[0] + _EPS:
            best = (gain, i, lc, rc)
    if best is None:
        return None
    _, i, lc, rc = best
    gain, ratio = split_gain(total, [lc, rc])
    if mdl_correction:
        split_info = gain / ratio if ratio > 0 else 0.0
        gain -= math.log2(n_candidates) / n
        if gain <= _EPS:
            return None
        ratio = gain / split_info if split_info > 0 else 0.0
    return gain, ratio, float((xs[i] + xs[i + 1]) / 2)


def _safe_entropy(c: np.ndarray) -> float:
    return entropy(c) if c.sum() > 0 else 0.0


def _nominal_split(x, y, n_values, n_classes, min_leaf):
    codes = x.astype(int)
    children = [_class_counts(y[codes == v], n_classes) for v in range(n_values)]
    if sum(1 for c in children if c.sum() >= min_leaf) < 2:
        return None
    gain, ratio = split_gain(_class_counts(y, n_classes), children)
    return gain, ratio, None


def _grow(X, y, d: Dataset, params: TreeParams, fallback) -> TreeNode:
    n_classes = d.n_classes
    counts = _class_counts(y, n_classes)
    node = TreeNode(counts, fallback=fallback)
    n = y.shape[0]
    if n == 0 or (counts > 0).sum() <= 1 or n < 2 * params.min_leaf_instances:
        return node

    candidates = []
    for a in d.features:
        col = X[:, a.index]
        if a.is_numeric:
            min_split = _min_split(n, n_classes, params)
            res = _best_numeric_split(col, y, n_classes, min_split, params.mdl_correction)
        else:
            res = _nominal_split(col, y, len(a.nominal_values), n_classes, params.min_leaf_instances)
        if res is not None and res[0] > _EPS:
            candidates.append((a.index, *res))
    if not candidates:
        return node

    if params.split_criterion == GAIN_RATIO:
        avg = sum(c[1] for c in candidates) / len(candidates)
        eligible = [c for c in candidates if c[1] >= avg - _EPS]
        score = lambda c: c[2]  # noqa: E731
    else:
        eligible = candidates
        score = lambda c: c[1]  # noqa: E731
    # candidates are in attribute order, so the first maximum wins ties
    best = eligible[0]
    for c in eligible[1:]:
        if score(c) > score(best) + _EPS:
            best = c
    attr, _, _, threshold = best

    node.attribute = attr
    col = X[:, attr]
    if threshold is not None:
        node.threshold = threshold
        masks = [col <= threshold, col > threshold]
    else:
        masks = [col.astype(int) == v for v in range(len(d.attributes[attr].nominal_values))]
    node.children = [_grow(X[m], y[m], d, params, counts) for m in masks]
    return node


def _prune(node: TreeNode, cf: float) -> tuple[TreeNode, float]:
    """Bottom-up subtree replacement. Returns the node and its estimated errors."""
    if node.is_leaf:
        return node, leaf_estimated_errors(node.counts, cf)
    subtree_errors = 0.0
    children = []
    for ch in node.children:
        pruned, errs = _prune(ch, cf)
        children.append(pruned)
        subtree_errors += errs
    node.children = children
    leaf_errors = leaf_estimated_errors(node.counts, cf)
    if leaf_errors <= subtree_errors + _EPS:
        return node.make_leaf(), leaf_errors
    return node, subtree_errors


def training_errors(node: TreeNode) -> float:
    if node.is_leaf:
        return float(node.counts.sum() - node.counts.max())
    return sum(training_errors(ch) for ch in node.children)


def _collapse(node: TreeNode) -> TreeNode:
    if node.is_leaf:
        return node
    if training_errors(node) >= node.counts.sum() - node.counts.max() - 1e-3:
        return node.make_leaf()
    node.children = [_collapse(ch) for ch in node.children]
    return node


def _copy(node: TreeNode) -> TreeNode:
    return TreeNode(
        node.counts.copy(),
        node.attribute,
        node.threshold,
        [_copy(ch) for ch in node.children],
        node.fallback,
    )


def prune(t: DecisionTree, params: TreeParams | None = None) -> DecisionTree:
    """Return a pruned copy of ``t``; the input tree is left untouched."""
    params = params or t.params
    root, _ = _prune(_copy(t.root), params.confidence_factor)
    return DecisionTree(root, t.schema, t.params, t.attribute_names, t.nominal_values, t.class_labels)


def build_tree(d: Dataset, params: TreeParams | None = None) -> DecisionTree:
    params = params or TreeParams()
    if len(d) == 0:
        raise FitError("cannot grow a tree on an empty dataset")
    feature_cols = d.values[:, d.feature_indices]
    if np.isnan(feature_cols).any():
        raise FitError("training data has missing values; impute before growing a tree")
    root = _grow(d.values, d.y, d, params, None)
    if params.collapse:
        root = _collapse(root)
    tree = DecisionTree(
        root,
        d.fingerprint(),
        params,
        tuple(a.name for a in d.attributes),
        tuple(a.nominal_values for a in d.attributes),
        d.class_labels,
    )
    return prune(tree, params) if params.prune else tree
