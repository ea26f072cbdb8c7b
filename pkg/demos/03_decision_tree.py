"""
Growing and pruning a C4.5 tree
===============================

A tree is grown on the reduced Pima data, printed, and evaluated with
stratified 10-fold cross-validation and a 70:30 split.
"""

from classmine.dataset import load_pima
from classmine.evaluation import CrossValidation, PercentageSplit, evaluate
from classmine.feature_select import best_first_select
from classmine.pipeline import render_report
from classmine.preprocess import apply_impute, apply_normalize, fit_impute, fit_normalize
from classmine.tree import TreeParams, build_tree

d = load_pima()
d = apply_impute(fit_impute(d), d)
d = apply_normalize(fit_normalize(d), d)
d = d.select(best_first_select(d).names(d))

tree = build_tree(d)
print(tree.to_text())

# a tree without the pessimistic-error pruning pass, for size comparison
raw = build_tree(d, TreeParams(prune=False, collapse=False))
print(f"\nunpruned: {raw.n_nodes} nodes, pruned: {tree.n_nodes} nodes")

for protocol in (CrossValidation(10, seed=1), PercentageSplit(70, seed=1)):
    report = evaluate(lambda train: build_tree(train), d, protocol, "j48")
    print()
    print(render_report(report))
