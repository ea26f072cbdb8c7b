"""
Gaussian naive Bayes
====================

Fit the model, look at its per-class Gaussians, score one patient by hand
and evaluate on a 70:30 split.
"""

import math

from classmine.dataset import load_pima
from classmine.evaluation import PercentageSplit, evaluate
from classmine.feature_select import best_first_select
from classmine.naive_bayes import fit_nb
from classmine.pipeline import render_report
from classmine.preprocess import apply_impute, apply_normalize, fit_impute, fit_normalize

d = load_pima()
d = apply_impute(fit_impute(d), d)
d = apply_normalize(fit_normalize(d), d)
d = d.select(best_first_select(d).names(d))

m = fit_nb(d)
print("priors:", dict(zip(m.class_labels, m.priors.round(4))))
for (c, a), g in sorted(m.numeric.items()):
    print(f"  {m.class_labels[c]:<16}{m.attribute_names[a]:<6} mean {g.mean:.3f} std {g.std:.3f}")

# the posterior is prior times likelihoods, normalized over the classes
inst = d.instance(0)
scores = m.log_scores(inst)
by_hand = [math.exp(s - max(scores)) for s in scores]
by_hand = [v / sum(by_hand) for v in by_hand]
print("\nfirst patient, by hand:", [round(v, 4) for v in by_hand])
print("first patient, model:  ", [round(v, 4) for v in m.posterior(inst).probabilities])

report = evaluate(fit_nb, d, PercentageSplit(70, seed=1), "nb")
print()
print(render_report(report))
