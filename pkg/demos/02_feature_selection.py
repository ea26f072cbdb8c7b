"""
Correlation-based feature selection
===================================

Numeric columns are discretized against the class, pairwise symmetric
uncertainty is cached, and a best-first search looks for the subset with the
highest CFS merit.
"""

from classmine.dataset import load_pima
from classmine.feature_select import (
    best_first_select,
    build_correlation_cache,
    cfs_merit,
    mdl_discretize,
)
from classmine.preprocess import apply_impute, apply_normalize, fit_impute, fit_normalize

d = load_pima()
d = apply_impute(fit_impute(d), d)
d = apply_normalize(fit_normalize(d), d)

# cut points chosen by the MDL stopping rule, one list per attribute
for a in d.features:
    cuts = mdl_discretize(d.column(a.index), d.y)
    print(f"{a.name:<6} {len(cuts)} cut(s) {[round(c, 3) for c in cuts]}")

cache = build_correlation_cache(d)
print("\nclass correlation (symmetric uncertainty):")
for i, su in sorted(cache.su_fc.items(), key=lambda kv: -kv[1]):
    print(f"  {d.attributes[i].name:<6} {su:.4f}")

# the search on its own, then with the locally-predictive pass that adds
# back features more correlated with the class than with the chosen ones
bare = best_first_select(d, locally_predictive=False)
full = best_first_select(d)
print("\nsearch only:       ", bare.names(d), f"merit {bare.merit:.4f}")
print("with local pass:   ", full.names(d), f"merit {full.merit:.4f}")

# merit of a hand-picked subset, for comparison
idx = [d.attribute(n).index for n in ("plas", "mass")]
print("merit {plas, mass}:", round(cfs_merit(idx, cache), 4))
