"""Command line entry point.

Subcommands: ``prep``, ``select``, ``train``, ``eval``, ``run`` and
``stats``. Without ``--data`` the bundled Pima file is used. Relative data
paths are resolved against ``$CLASSMINE_DATA_DIR`` when it is set.

Exit codes: 0 success, 1 validation error, 2 I/O error, 3 internal error.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from . import __version__
from .dataset import PIMA_CLASS_MAP, PIMA_LABEL_ORDER, class_distribution, load_csv, pima_path, to_csv
from .errors import ClassMineError
from .evaluation import CrossValidation, PercentageSplit, evaluate
from .feature_select import best_first_select
from .naive_bayes import fit_nb
from .pipeline import PipelineConfig, StageError, model_factory, render_report, run_pipeline, write_outputs
from .preprocess import apply_impute, apply_normalize, descriptive_stats, fit_impute, fit_normalize
from .tree import TreeParams, build_tree

log = logging.getLogger("classmine")

EXIT_OK, EXIT_VALIDATION, EXIT_IO, EXIT_INTERNAL = 0, 1, 2, 3
DATA_DIR_ENV = "CLASSMINE_DATA_DIR"


def resolve_data(path: str | None) -> Path:
    if path is None:
        return pima_path()
    p = Path(path)
    base = os.environ.get(DATA_DIR_ENV)
    if base and not p.is_absolute():
        p = Path(base) / p
    if not p.is_file():
        raise FileNotFoundError(f"data file not found: {p}")
    return p


def _load(args):
    return load_csv(
        resolve_data(args.data),
        args.class_column,
        label_order=args.label_order.split(",") if args.label_order else None,
        class_map=PIMA_CLASS_MAP if args.map_binary_class else None,
        zeros_as_missing=args.zeros_as_missing.split(",") if args.zeros_as_missing else (),
    )


def _tree_params(args) -> TreeParams:
    return TreeParams(
        min_leaf_instances=args.min_leaf,
        confidence_factor=args.confidence,
        prune=not args.unpruned,
        split_criterion=args.criterion,
    )


def cmd_prep(args) -> int:
    d = _load(args)
    params = {}
    if not args.no_impute:
        p = fit_impute(d)
        d = apply_impute(p, d)
        params["imputation"] = p.to_dict()
    if not args.no_normalize:
        p = fit_normalize(d)
        d = apply_normalize(p, d)
        params["normalization"] = p.to_dict()
    stats = {k: vars(v) for k, v in descriptive_stats(d).items()}
    Path(args.out).write_text(to_csv(d))
    sidecar = Path(args.params or f"{args.out}.json")
    sidecar.write_text(json.dumps({"params": params, "stats": stats}, indent=2) + "\n")
    print(f"wrote {args.out} and {sidecar}")
    return EXIT_OK


def cmd_select(args) -> int:
    d = _load(args)
    subset = best_first_select(d, args.search_termination, locally_predictive=not args.no_locally_predictive)
    names = subset.names(d)
    print("Selected attributes: " + ", ".join(names))
    print(f"Merit of best subset found: {subset.merit:.4f}")
    if args.out:
        Path(args.out).write_text(to_csv(d.select(names)))
    return EXIT_OK


def cmd_train(args) -> int:
    d = _load(args)
    if args.algo == "j48":
        model = build_tree(d, _tree_params(args))
        print(model.to_text())
    else:
        model = fit_nb(d)
        print(model.to_json())
    if args.model_json:
        Path(args.model_json).write_text(model.to_json() + "\n")
    return EXIT_OK


def cmd_eval(args) -> int:
    d = _load(args)
    protocol = PercentageSplit(args.split, args.seed) if args.split is not None else CrossValidation(args.cv, args.seed)
    report = evaluate(model_factory(args.algo, _tree_params(args)), d, protocol, args.algo)
    _emit(report, args)
    return EXIT_OK


def _emit(report, args):
    print(render_report(report, args.format), end="")
    if args.json:
        Path(args.json).write_text(render_report(report, "json"))


def _config_from_args(args) -> PipelineConfig:
    values = {}
    if args.config:
        values.update(json.loads(Path(args.config).read_text()))
    overrides = {
        "data": args.data,
        "class_column": args.class_column if args.class_column != "last" else None,
        "algorithm": args.algo,
        "seed": args.seed,
        "json_out": args.json,
        "text_out": args.text,
    }
    values.update({k: v for k, v in overrides.items() if v is not None})
    if args.data is not None:
        values["data"] = str(resolve_data(args.data))
    if args.label_order:
        values["label_order"] = args.label_order.split(",")
    if args.zeros_as_missing:
        values["zeros_as_missing"] = args.zeros_as_missing.split(",")
    if args.split is not None:
        values["split_pct"], values["cv_folds"] = args.split, None
    elif args.cv is not None:
        values["cv_folds"], values["split_pct"] = args.cv, None
    for flag, key in (("no_impute", "impute"), ("no_normalize", "normalize"), ("no_select", "select")):
        if getattr(args, flag):
            values[key] = False
    if args.leak_free:
        values["leak_free"] = True
    tree = dict(values.get("tree", {}))
    for arg, key in (("min_leaf", "min_leaf_instances"), ("confidence", "confidence_factor"), ("criterion", "split_criterion")):
        if getattr(args, arg) is not None:
            tree[key] = getattr(args, arg)
    if args.unpruned:
        tree["prune"] = False
    values["tree"] = tree
    return PipelineConfig.from_dict(values)


def cmd_run(args) -> int:
    cfg = _config_from_args(args)
    report, manifest = run_pipeline(cfg)
    write_outputs(report, cfg)
    print(f"Selected attributes: {', '.join(manifest.selected_features)}")
    print(render_report(report, args.format), end="")
    if args.manifest:
        Path(args.manifest).write_text(manifest.to_json() + "\n")
    for stage, secs in manifest.timings.items():
        log.info("stage %-10s %.3fs", stage, secs)
    return EXIT_OK


def cmd_stats(args) -> int:
    d = _load(args)
    if not args.raw:
        d = apply_impute(fit_impute(d), d)
        d = apply_normalize(fit_normalize(d), d)
    print(f"{'Parameter':<12}{'Minimum':>10}{'Maximum':>10}{'Mean':>10}{'Std. Dev.':>11}")
    for name, s in descriptive_stats(d).items():
        print(f"{name:<12}{s.minimum:>10.3f}{s.maximum:>10.3f}{s.mean:>10.3f}{s.std:>11.3f}")
    print()
    dist = class_distribution(d)
    print("Class distribution")
    width = max(len(lab) for lab in dist.labels)
    for lab, c in zip(dist.labels, dist.counts):
        pct = 100 * c / dist.total
        print(f"  {lab:<{width}} {c:>6d} {pct:6.2f}% {'#' * round(pct / 2)}")
    return EXIT_OK


def _add_data_args(p, protocol=False, tree=False, output=False):
    p.add_argument("--data", help="CSV file (default: bundled Pima dataset)")
    p.add_argument("--class-column", default="last")
    p.add_argument(
        "--label-order",
        default=",".join(PIMA_LABEL_ORDER),
        help="comma-separated class label order; empty string keeps file order",
    )
    p.add_argument("--map-binary-class", action="store_true", help="read class 1/0 as tested_positive/tested_negative")
    p.add_argument("--zeros-as-missing", help="comma-separated numeric columns whose 0 means missing")
    if protocol:
        g = p.add_mutually_exclusive_group()
        g.add_argument("--cv", type=int, help="stratified k-fold cross-validation")
        g.add_argument("--split", type=float, help="percentage split, train share in percent")
        p.add_argument("--seed", type=int)
    if tree:
        p.add_argument("--min-leaf", type=int)
        p.add_argument("--confidence", type=float)
        p.add_argument("--criterion", choices=["gain_ratio", "info_gain"])
        p.add_argument("--unpruned", action="store_true")
    if output:
        p.add_argument("--json", help="write the report as JSON")
        p.add_argument("--format", choices=["text", "json", "csv"], default="text")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="classmine", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("prep", help="impute + normalize a CSV, write params/stats sidecar")
    _add_data_args(p)
    p.add_argument("--out", required=True)
    p.add_argument("--params", help="sidecar JSON path (default: OUT.json)")
    p.add_argument("--no-impute", action="store_true")
    p.add_argument("--no-normalize", action="store_true")
    p.set_defaults(func=cmd_prep)

    p = sub.add_parser("select", help="CFS best-first feature selection")
    _add_data_args(p)
    p.add_argument("--out", help="write the reduced CSV")
    p.add_argument("--search-termination", type=int, default=5)
    p.add_argument("--no-locally-predictive", action="store_true")
    p.set_defaults(func=cmd_select)

    p = sub.add_parser("train", help="train a model on the whole file and dump it")
    _add_data_args(p, tree=True)
    p.add_argument("--algo", choices=["j48", "nb"], default="j48")
    p.add_argument("--model-json")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("eval", help="evaluate a model on an already prepared file")
    _add_data_args(p, protocol=True, tree=True, output=True)
    p.add_argument("--algo", choices=["j48", "nb"], default="j48")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("run", help="full pipeline: prep, select, train, evaluate")
    _add_data_args(p, protocol=True, tree=True, output=True)
    p.add_argument("--config", help="JSON config file; flags override it")
    p.add_argument("--algo", choices=["j48", "nb"])
    p.add_argument("--text", help="write the text report here")
    p.add_argument("--manifest", help="write the run manifest as JSON")
    p.add_argument("--no-impute", action="store_true")
    p.add_argument("--no-normalize", action="store_true")
    p.add_argument("--no-select", action="store_true")
    p.add_argument("--leak-free", action="store_true", help="fit filters and selection inside each training part")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("stats", help="descriptive statistics and class distribution")
    _add_data_args(p)
    p.add_argument("--raw", action="store_true", help="skip imputation and normalization")
    p.set_defaults(func=cmd_stats)
    return parser


def _fill_tree_defaults(args):
    defaults = TreeParams()
    if getattr(args, "command", None) in ("train", "eval"):
        if args.min_leaf is None:
            args.min_leaf = defaults.min_leaf_instances
        if args.confidence is None:
            args.confidence = defaults.confidence_factor
        if args.criterion is None:
            args.criterion = defaults.split_criterion
    if getattr(args, "command", None) == "eval":
        if args.seed is None:
            args.seed = 1
        if args.cv is None and args.split is None:
            args.cv = 10


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    _fill_tree_defaults(args)
    try:
        return args.func(args)
    except StageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO if isinstance(exc.cause, OSError) else EXIT_VALIDATION
    except (ClassMineError, ValueError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except Exception as exc:  # noqa: BLE001
        print(f"internal error: {exc!r}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
