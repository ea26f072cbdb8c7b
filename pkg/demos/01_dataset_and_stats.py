"""
Loading the Pima data and looking at it
=======================================

The bundled file is read with its checksum verified, then imputed and
min-max normalized. We print per-attribute statistics and the class balance.
"""

import numpy as np

from classmine.dataset import class_distribution, load_pima
from classmine.preprocess import apply_impute, apply_normalize, descriptive_stats, fit_impute, fit_normalize

d = load_pima()
print(f"{len(d)} instances, attributes: {', '.join(a.name for a in d.features)}")

# zeros in plas or mass are physiologically impossible, but the file does not
# mark them missing, so by default they stay as values
print("rows with plas == 0:", int(np.sum(d.column("plas") == 0)))

# imputation is a no-op here (nothing is '?'), normalization maps each column
# onto [0, 1] using its own min and max
imp = fit_impute(d)
d = apply_impute(imp, d)
norm = fit_normalize(d)
d = apply_normalize(norm, d)
print("plas raw range:", norm.to_dict()["plas"])

print(f"\n{'attribute':<10}{'min':>8}{'max':>8}{'mean':>8}{'std':>8}")
for name, s in descriptive_stats(d).items():
    print(f"{name:<10}{s.minimum:>8.3f}{s.maximum:>8.3f}{s.mean:>8.3f}{s.std:>8.3f}")

dist = class_distribution(d)
print()
for label, count in zip(dist.labels, dist.counts):
    print(f"{label:<16}{count:>5}  {'#' * (count // 10)}")
