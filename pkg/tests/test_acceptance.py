"""Acceptance gate: one test per criterion, each reporting a PASS/FAIL line.

The lines are collected in ``conftest.ACCEPTANCE_LINES`` and printed in the
terminal summary. Run alone with ``pytest tests/test_acceptance.py -v``.
"""
import time

import numpy as np
import pytest

import conftest
import test_evaluation
import test_feature_select
import test_naive_bayes
import test_tree
from classmine.dataset import class_distribution
from classmine.evaluation import confusion_matrix, kappa, percentage_split
from classmine.feature_select import best_first_select
from classmine.pipeline import PipelineConfig, render_report, run_pipeline
from classmine.preprocess import descriptive_stats

REFERENCE_MATRICES = {
    "j48 cv": ([[149, 119], [74, 426]], 0.4245, 575, 768, "74.8698"),
    "j48 split": ([[48, 24], [29, 129]], 0.4742, 177, 230, "76.9565"),
    "nb split": ([[44, 28], [19, 139]], 0.5081, 183, 230, "79.5652"),
}


def record(criterion, ok, detail):
    conftest.ACCEPTANCE_LINES.append(f"{'PASS' if ok else 'FAIL'}  {criterion}: {detail}")
    assert ok, detail


@pytest.fixture(scope="module")
def runs():
    out = {}
    t0 = time.perf_counter()
    out["j48 cv"] = run_pipeline(PipelineConfig())
    out["elapsed"] = time.perf_counter() - t0
    out["j48 split"] = run_pipeline(PipelineConfig(cv_folds=None, split_pct=70))
    out["nb split"] = run_pipeline(PipelineConfig(algorithm="nb", cv_folds=None, split_pct=70))
    return out


def test_1_kappa_oracle():
    details, ok = [], True
    for name, (m, expected, *_) in REFERENCE_MATRICES.items():
        k = kappa(m)
        ok &= abs(k - expected) <= 5e-4
        details.append(f"{name} {k:.4f} (ref {expected})")
    timings = []
    for _ in range(200):
        t0 = time.perf_counter()
        kappa(REFERENCE_MATRICES["j48 cv"][0])
        timings.append(time.perf_counter() - t0)
    ms = 1000 * float(np.median(timings))
    ok &= ms < 1.0
    record("1 kappa oracle", ok, "; ".join(details) + f"; median {ms:.4f} ms")


def test_2_accuracy_oracle():
    details, ok = [], True
    for name, (m, _, correct, total, pct) in REFERENCE_MATRICES.items():
        cm = confusion_matrix(*_pairs(m), labels=("p", "n"))
        acc = 100 * cm.correct / cm.total
        ok &= cm.correct == correct and cm.total == total and f"{acc:.4f}" == pct
        details.append(f"{name} {cm.correct}/{cm.total} = {acc:.4f}%")
    record("2 accuracy oracle", ok, "; ".join(details))


def _pairs(m):
    actual, predicted = [], []
    for i, row in enumerate(m):
        for j, count in enumerate(row):
            actual += ["pn"[i]] * count
            predicted += ["pn"[j]] * count
    return actual, predicted


def test_3_split_sizes(pima):
    train, test = percentage_split(pima, 70)
    record("3 split sizes", (len(train), len(test)) == (538, 230), f"train {len(train)} / test {len(test)}")


def test_4_feature_selection(pima_prepared):
    subset = best_first_select(pima_prepared)
    names = set(subset.names(pima_prepared))
    record(
        "4 feature selection",
        names == {"plas", "mass", "pedi", "age"},
        f"{sorted(names)} merit {subset.merit:.4f}",
    )


@pytest.mark.parametrize(
    "name, reference",
    [("j48 cv", 74.87), ("j48 split", 76.96), ("nb split", 79.57)],
)
def test_5_end_to_end_accuracy(runs, name, reference):
    r = runs[name][0]
    ok = abs(r.accuracy_pct - reference) <= 4.0
    record(f"5 end-to-end {name}", ok, f"{r.accuracy_pct:.4f}% (ref {reference}% +-4)")


def test_5_runtime(runs):
    secs = runs["elapsed"]
    record("5 pipeline runtime", secs < 10.0, f"{secs:.2f} s for J48 10-fold run")


def test_5_error_metrics_consistency(runs):
    refs = {"j48 split": (0.3374, 0.4029), "nb split": (0.2884, 0.381)}
    details, ok = [], True
    for name, (mae, rmse) in refs.items():
        r = runs[name][0]
        ok &= abs(r.mae - mae) <= 0.05 and abs(r.rmse - rmse) <= 0.05
        details.append(f"{name} MAE {r.mae:.4f} (ref {mae}) RMSE {r.rmse:.4f} (ref {rmse})")
    record("5 MAE/RMSE consistency", ok, "; ".join(details))


def test_6_descriptive_statistics(pima_prepared):
    refs = {"plas": (0.608, 0.161), "mass": (0.477, 0.117), "pedi": (0.168, 0.141), "age": (0.204, 0.196)}
    stats = descriptive_stats(pima_prepared)
    details, ok = [], True
    for name, (mean, std) in refs.items():
        s = stats[name]
        ok &= abs(s.mean - mean) <= 0.02 and abs(s.std - std) <= 0.02
        details.append(f"{name} {s.mean:.3f}/{s.std:.3f}")
    record("6 descriptive statistics", ok, "; ".join(details))


def test_7_property_suites(pima_reduced):
    suites = {
        "entropy bounds": test_tree.test_entropy_bounds,
        "SU symmetry and range": test_feature_select.test_su_symmetric_and_bounded,
        "best-first equals exhaustive": test_feature_select.test_best_first_matches_exhaustive,
        "errors equal double loop": test_evaluation.test_errors_match_double_loop,
        "prune never grows": test_tree.test_pruning_only_shrinks,
        "posterior normalization": lambda: test_naive_bayes.test_posterior_normalized_on_random_instances(
            pima_reduced
        ),
        "byte-identical JSON": _identical_json,
    }
    failed = []
    for name, fn in suites.items():
        try:
            fn()
        except Exception as exc:  # noqa: BLE001
            failed.append(f"{name} ({type(exc).__name__})")
    record("7 property suites", not failed, "all hold" if not failed else "failed: " + ", ".join(failed))


def _identical_json():
    cfg = PipelineConfig(algorithm="nb", cv_folds=None, split_pct=70, seed=7)
    a, b = run_pipeline(cfg), run_pipeline(cfg)
    assert render_report(a[0], "json") == render_report(b[0], "json")
    assert a[1].to_json() == b[1].to_json()


def test_8_class_distribution(pima):
    dist = class_distribution(pima).as_dict()
    record(
        "8 class distribution",
        dist == {"tested_positive": 268, "tested_negative": 500},
        str(dist),
    )
