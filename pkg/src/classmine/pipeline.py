"""End-to-end run: load, impute, normalize, select, train, evaluate, report."""
from __future__ import annotations

import csv
import io
import json
import time
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

import numpy as np

from . import __version__
from .dataset import PIMA_CLASS_MAP, PIMA_LABEL_ORDER, Dataset, load_csv, pima_path, sha256_of
from .errors import ClassMineError
from .evaluation import CrossValidation, EvaluationReport, PercentageSplit, evaluate
from .feature_select import best_first_select
from .naive_bayes import fit_nb
from .preprocess import apply_impute, apply_normalize, fit_impute, fit_normalize
from .tree import TreeParams, build_tree

ALGORITHMS = ("j48", "nb")


class StageError(ClassMineError):
    """Wraps the failure of one pipeline stage."""

    def __init__(self, stage: str, cause: BaseException):
        super().__init__(f"[{stage}] {cause}")
        self.stage = stage
        self.cause = cause


@dataclass
class PipelineConfig:
    data: str | None = None
    class_column: str = "last"
    label_order: list[str] | None = field(default_factory=lambda: list(PIMA_LABEL_ORDER))
    class_map: dict[str, str] | None = field(default_factory=lambda: dict(PIMA_CLASS_MAP))
    zeros_as_missing: list[str] = field(default_factory=list)
    impute: bool = True
    normalize: bool = True
    select: bool = True
    leak_free: bool = False
    algorithm: str = "j48"
    tree: TreeParams = field(default_factory=TreeParams)
    cv_folds: int | None = 10
    split_pct: float | None = None
    seed: int = 1
    json_out: str | None = None
    text_out: str | None = None

    def __post_init__(self):
        if isinstance(self.tree, dict):
            self.tree = TreeParams(**self.tree)
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"algorithm must be one of {ALGORITHMS}")
        if (self.cv_folds is None) == (self.split_pct is None):
            raise ValueError("choose exactly one protocol: cv_folds or split_pct")

    @property
    def protocol(self) -> CrossValidation | PercentageSplit:
        if self.cv_folds is not None:
            return CrossValidation(self.cv_folds, self.seed)
        return PercentageSplit(self.split_pct, self.seed)

    def data_path(self) -> Path:
        return Path(self.data) if self.data else pima_path()

    def to_dict(self) -> dict:
        out = asdict(self)
        out["data"] = str(self.data_path())
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "PipelineConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)


@dataclass
class RunManifest:
    config: dict
    dataset_sha256: str
    n_instances: int
    selected_features: list[str]
    timings: dict[str, float]
    version: str = __version__

    def to_dict(self, timings: bool = True) -> dict:
        out = asdict(self)
        if not timings:
            out.pop("timings")
        return out

    def to_json(self, timings: bool = False) -> str:
        """JSON form; timings are left out by default so identical runs serialize identically."""
        return json.dumps(self.to_dict(timings), indent=2, sort_keys=True)


def prepare(d: Dataset, impute: bool = True, normalize: bool = True, select: bool = True):
    """Fit the filter chain on ``d``; returns ``(transform, selected_names)``."""
    steps = []
    cur = d
    if impute:
        p = fit_impute(cur)
        steps.append(lambda x, p=p: apply_impute(p, x))
        cur = steps[-1](cur)
    if normalize:
        p = fit_normalize(cur)
        steps.append(lambda x, p=p: apply_normalize(p, x))
        cur = steps[-1](cur)
    names = [a.name for a in cur.features]
    if select:
        subset = best_first_select(cur)
        names = subset.names(cur)
        steps.append(lambda x, names=names: x.select(names))

    def transform(x: Dataset) -> Dataset:
        for step in steps:
            x = step(x)
        return x

    return transform, names


def model_factory(algorithm: str, tree_params: TreeParams | None = None):
    if algorithm == "j48":
        return lambda train: build_tree(train, tree_params or TreeParams())
    if algorithm == "nb":
        return fit_nb
    raise ValueError(f"unknown algorithm {algorithm!r}")


class _LeakFreeModel:
    def __init__(self, transform, model):
        self.transform = transform
        self.model = model

    def predict_proba(self, d: Dataset) -> np.ndarray:
        return self.model.predict_proba(self.transform(d))


def leak_free_factory(algorithm: str, tree_params: TreeParams | None, cfg: PipelineConfig):
    """Filters and selection fitted inside each training part only."""
    inner = model_factory(algorithm, tree_params)

    def fit(train: Dataset):
        transform, _ = prepare(train, cfg.impute, cfg.normalize, cfg.select)
        return _LeakFreeModel(transform, inner(transform(train)))

    return fit


def run_pipeline(cfg: PipelineConfig) -> tuple[EvaluationReport, RunManifest]:
    timings: dict[str, float] = {}

    def stage(name, fn, *args):
        t0 = time.perf_counter()
        try:
            return fn(*args)
        except ClassMineError as exc:
            if isinstance(exc, StageError):
                raise
            raise StageError(name, exc) from exc
        except (ValueError, OSError) as exc:
            raise StageError(name, exc) from exc
        finally:
            timings[name] = round(time.perf_counter() - t0, 6)

    path = cfg.data_path()
    raw = stage(
        "load",
        lambda: load_csv(
            path,
            cfg.class_column,
            label_order=cfg.label_order,
            class_map=cfg.class_map,
            zeros_as_missing=cfg.zeros_as_missing,
        ),
    )
    checksum = sha256_of(path)

    if cfg.leak_free:
        data = raw
        selected = [a.name for a in raw.features]
        factory = leak_free_factory(cfg.algorithm, cfg.tree, cfg)
    else:
        data = raw
        if cfg.impute:
            data = stage("impute", lambda: apply_impute(fit_impute(data), data))
        if cfg.normalize:
            data = stage("normalize", lambda d=data: apply_normalize(fit_normalize(d), d))
        if cfg.select:
            subset = stage("select", best_first_select, data)
            data = data.select(sorted(subset.members))
        selected = [a.name for a in data.features]
        factory = model_factory(cfg.algorithm, cfg.tree)

    report = stage("evaluate", evaluate, factory, data, cfg.protocol, cfg.algorithm)
    manifest = RunManifest(cfg.to_dict(), checksum, len(raw), selected, timings)
    return report, manifest


def write_outputs(report: EvaluationReport, cfg: PipelineConfig) -> list[Path]:
    """Write configured artifacts; on failure remove whatever was written."""
    written: list[Path] = []
    try:
        if cfg.json_out:
            p = Path(cfg.json_out)
            p.write_text(render_report(report, "json"))
            written.append(p)
        if cfg.text_out:
            p = Path(cfg.text_out)
            p.write_text(render_report(report, "text"))
            written.append(p)
    except BaseException:
        for p in written:
            p.unlink(missing_ok=True)
        raise
    return written


def _protocol_title(protocol: dict) -> str:
    if protocol.get("kind") == "cv":
        return f"{protocol['folds']}-fold Cross Validation"
    return f"Percentage Split ({protocol['train_pct']:g}:{100 - protocol['train_pct']:g})"


def _render_text(r: EvaluationReport) -> str:
    total = r.total
    lines = [
        f"=== {r.model.upper()} - {_protocol_title(r.protocol)} (seed {r.seed}) ===",
        "",
        f"{'':36}{'No. of Instances':>18}{'Percentage':>14}",
        f"{'Correctly Classified Instances':36}{r.correct:>18d}{100 * r.correct / total:>12.4f} %",
        f"{'Incorrectly Classified Instances':36}{r.incorrect:>18d}{100 * r.incorrect / total:>12.4f} %",
        "",
        f"{'Kappa statistic':36}{r.kappa:>12.4f}",
        f"{'Mean absolute error':36}{r.mae:>12.4f}",
        f"{'Root mean squared error':36}{r.rmse:>12.4f}",
        f"{'Relative absolute error':36}{r.rae_pct:>12.4f} %",
        f"{'Root relative squared error':36}{r.rrse_pct:>12.4f} %",
        f"{'Total Number of Instances':36}{total:>12d}",
        "",
        "=== Confusion Matrix ===",
        "",
    ]
    letters = [chr(ord("A") + i) if i < 26 else f"C{i}" for i in range(len(r.labels))]
    heads = [f"{c} - {lab}" for c, lab in zip(letters, r.labels)]
    width = max(len(h) for h in heads) + 2
    lines.append(" " * width + "".join(f"{h:>{width}}" for h in heads) + "   <-- classified as")
    for h, row in zip(heads, r.matrix):
        lines.append(f"{h:<{width}}" + "".join(f"{v:>{width}d}" for v in row))
    return "\n".join(lines) + "\n"


def _render_csv(r: EvaluationReport) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["metric", "value"])
    for name in ("correct", "incorrect", "accuracy_pct", "kappa", "mae", "rmse", "rae_pct", "rrse_pct"):
        w.writerow([name, repr(getattr(r, name))])
    w.writerow(["total", r.total])
    for i, actual in enumerate(r.labels):
        for j, pred in enumerate(r.labels):
            w.writerow([f"matrix[actual={actual}][predicted={pred}]", r.matrix[i][j]])
    return buf.getvalue()


def render_report(r: EvaluationReport, style: str = "text") -> str:
    if style == "text":
        return _render_text(r)
    if style == "json":
        return r.to_json() + "\n"
    if style == "csv":
        return _render_csv(r)
    raise ValueError(f"unknown report style {style!r}")
