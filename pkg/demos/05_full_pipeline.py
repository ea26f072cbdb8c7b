"""
The whole pipeline in one call
==============================

``run_pipeline`` chains load, impute, normalize, select and evaluate.
We run the three standard configurations and a leak-free variant where
filters and selection are fitted inside each training fold.
"""

from classmine.pipeline import PipelineConfig, run_pipeline

configs = {
    "J48, 10-fold CV": PipelineConfig(),
    "J48, 70:30 split": PipelineConfig(cv_folds=None, split_pct=70),
    "NB, 70:30 split": PipelineConfig(algorithm="nb", cv_folds=None, split_pct=70),
    "J48, 10-fold CV, leak-free": PipelineConfig(leak_free=True),
}

print(f"{'configuration':<28}{'correct':>10}{'accuracy':>10}{'kappa':>8}{'MAE':>8}{'RMSE':>8}")
for name, cfg in configs.items():
    r, manifest = run_pipeline(cfg)
    print(
        f"{name:<28}{f'{r.correct}/{r.total}':>10}{r.accuracy_pct:>9.2f}%"
        f"{r.kappa:>8.4f}{r.mae:>8.4f}{r.rmse:>8.4f}"
    )

print("\nfeatures used by the last default run:", ", ".join(run_pipeline(PipelineConfig())[1].selected_features))
